// latdec/arpa-lm.h

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

#ifndef LATDEC_ARPA_LM_H_
#define LATDEC_ARPA_LM_H_

#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "latdec/symbol-table.h"
#include "latdec/util.h"

namespace latdec {

class OovError : public Error {
 public:
  using Error::Error;
};

// A language-model state is a word history, kept as an index into the
// model's context table. Histories are always contexts present in the
// model, so two states with the same index are the same history.
struct LmState {
  int ctx = 0;
  bool operator==(const LmState &o) const { return ctx == o.ctx; }
  bool operator!=(const LmState &o) const { return ctx != o.ctx; }
};

// Backoff n-gram model loaded from ARPA text. Immutable after load. All
// costs are negated natural logs (ARPA stores log10; the conversion factor
// is ln 10). Queries are deterministic: exactly one (state, cost) successor
// per (state, word).
class BackoffLm {
 public:
  // Parses ARPA text. When `vocab` is given, words are interned into it so
  // several models and graphs can share ids; otherwise a fresh table is
  // created. Throws ParseError on malformed input and Error on structural
  // violations (count mismatch, n-gram with absent history, n-gram over
  // words missing from the unigram section).
  static BackoffLm LoadArpa(std::istream &in,
                            std::shared_ptr<SymbolTable> vocab = nullptr);
  static BackoffLm LoadArpaFile(const std::string &path,
                                std::shared_ptr<SymbolTable> vocab = nullptr);

  int Order() const { return order_; }
  const std::shared_ptr<SymbolTable> &Vocab() const { return vocab_; }

  // True when the model scores this id without the <unk> fallback.
  bool HasWord(int word) const { return known_words_.count(word) > 0; }
  int UnkId() const { return unk_id_; }      // -1 when absent
  int BosId() const { return bos_id_; }      // -1 when absent
  int EosId() const { return eos_id_; }      // -1 when absent
  bool HasSentenceEnd() const { return eos_id_ >= 0; }

  // Known regular words: unigram entries minus the sentence markers.
  std::vector<int> RegularWords() const;

  // State whose history is the sentence-begin context ([<s>] truncated to
  // an existing context, so the root for a unigram model).
  LmState Start() const { return LmState{start_ctx_}; }

  // Scores one word and advances the history. A word the model does not
  // know is scored as <unk> when the model has one; otherwise OovError.
  std::pair<LmState, double> Step(LmState s, int word) const;

  // Cost of ending the sentence in state s, i.e. of consuming </s>.
  // Models without </s> end sentences for free.
  double FinalCost(LmState s) const;

  // Start state, one Step per word, plus FinalCost.
  double SentenceCost(const std::vector<int> &words) const;

  // Introspection for tests and materialization.
  int NumContexts() const { return static_cast<int>(contexts_.size()); }
  const std::vector<int> &History(LmState s) const;
  struct Entry {
    double cost = 0.0;  // -ln P(word | history)
    int next_ctx = 0;
  };
  const std::map<int, Entry> &EntriesAt(LmState s) const;
  double BackoffCost(LmState s) const;
  LmState BackoffState(LmState s) const;

 private:
  BackoffLm() = default;

  struct Context {
    std::vector<int> history;  // word ids, oldest first
    std::map<int, Entry> entries;
    double backoff_cost = 0.0;
    int backoff_ctx = 0;  // root backs off to itself
  };

  std::vector<Context> contexts_;
  std::shared_ptr<SymbolTable> vocab_;
  std::unordered_set<int> known_words_;
  int order_ = 0;
  int start_ctx_ = 0;
  int bos_id_ = -1, eos_id_ = -1, unk_id_ = -1;

  friend class ArpaParser;
};

}  // namespace latdec

#endif  // LATDEC_ARPA_LM_H_
