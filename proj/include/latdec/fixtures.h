// latdec/fixtures.h

// Copyright 2026 The latdec Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Builders for the canonical test fixtures: random but properly normalized
// ARPA models, lexicon transducers, and composed decoding graphs.

#ifndef LATDEC_FIXTURES_H_
#define LATDEC_FIXTURES_H_

#include <memory>
#include <string>
#include <vector>

#include "latdec/arpa-lm.h"
#include "latdec/loglikes.h"
#include "latdec/symbol-table.h"
#include "latdec/wfst.h"

namespace latdec {

struct ArpaSpec {
  int order = 2;
  std::vector<std::string> words;
  unsigned seed = 1;
  // Probability mass a history keeps on its explicit entries; the rest is
  // distributed by backoff, which keeps every conditional normalized.
  double explicit_mass = 0.7;
  // Chance that an eligible history opens a section of higher-order grams.
  double context_keep = 0.8;
};

// Deterministic random ARPA text: unigrams over words + sentence markers,
// higher orders over random history subsets with Katz-style backoff weights
// so every conditional sums to one.
std::string RandomArpa(const ArpaSpec &spec);

struct LexiconSpec {
  int num_words = 0;
  // Explicit word names; empty means "w1".."w{num_words}".
  std::vector<std::string> words;
  // Each word is spelled with two phones; word k gets (first_phone(k),
  // second_phone(k)). shared_first > 0 folds the first phone onto that many
  // codes, making word onsets acoustically confusable.
  int shared_first = 0;
  // Adds a second-phone self-loop with this graph cost, so words can occupy
  // a variable number of frames; 0 disables the loop.
  double self_loop_cost = 0.0;
};

// Star-shaped lexicon transducer over the LM's vocabulary: phones in, word
// labels out on the first phone arc. Word ids come from `vocab` lookups;
// every word must already be interned (load the LM first).
Wfst BuildLexicon(const LexiconSpec &spec,
                  const std::shared_ptr<SymbolTable> &vocab);

// Compose(lexicon, lm_to_wfst(g)): the small-LM decoding graph used by the
// decoder fixtures.
Wfst BuildDecodingGraph(const Wfst &lexicon, const BackoffLm &g);

// One small decoding problem: graph, the two ARPA texts behind it, and its
// shared vocabulary. small_order/large_order pick the LM sizes; the large
// model is only used by BigLM-style decoders.
struct DecodingFixture {
  std::shared_ptr<SymbolTable> vocab;
  std::shared_ptr<const BackoffLm> small_lm;
  std::shared_ptr<const BackoffLm> large_lm;
  std::string small_arpa;
  std::string large_arpa;
  Wfst lexicon;
  Wfst graph;  // Compose(lexicon, small_lm as a machine)
};

struct FixtureSpec {
  int num_words = 4;
  int small_order = 1;
  int large_order = 2;
  unsigned seed = 1;
  LexiconSpec lexicon;  // num_words is overridden with the field above
};

DecodingFixture MakeDecodingFixture(const FixtureSpec &spec);

// The word-decision fixture: a three-word vocabulary where the unigram
// model prefers b after a, the bigram model prefers c after a, and the
// likelihoods for b and c are identical. Reference transcript is "a c".
struct FlipFixture {
  DecodingFixture fixture;
  LogLikelihoods loglikes;
  std::vector<int> ref_words;
};

FlipFixture MakeFlipFixture();

}  // namespace latdec

#endif  // LATDEC_FIXTURES_H_
