// latdec/tests/arpa-lm-test.cc

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "latdec/arpa-lm.h"
#include "latdec/compose.h"
#include "latdec/fixtures.h"
#include "latdec/lm-to-fst.h"
#include "latdec/paths.h"
#include "test-util.h"

using namespace latdec;

namespace {

BackoffLm Load(const std::string &text,
               std::shared_ptr<SymbolTable> vocab = nullptr) {
  std::istringstream in(text);
  return BackoffLm::LoadArpa(in, std::move(vocab));
}

const char kUniformUnigram[] =
    "\\data\\\n"
    "ngram 1=2\n"
    "\n"
    "\\1-grams:\n"
    "-0.30103 a\n"
    "-0.30103 b\n"
    "\n"
    "\\end\\\n";

// Bigram fixture with hand-checkable values; expected costs below follow
// the backoff recursion -ln P(w|h) = -ln10 * (log10 terms summed).
const char kBigram[] =
    "\\data\\\n"
    "ngram 1=4\n"
    "ngram 2=3\n"
    "\n"
    "\\1-grams:\n"
    "-99 <s> -0.30103\n"
    "-0.52287875 </s>\n"
    "-0.39794001 a -0.17609126\n"
    "-0.52287875 b\n"
    "\n"
    "\\2-grams:\n"
    "-0.22184875 <s> a\n"
    "-0.39794001 a a\n"
    "-0.52287875 a b\n"
    "\n"
    "\\end\\\n";

}  // namespace

TEST_CASE("uniform unigram scores every word at ln 2") {
  const BackoffLm lm = Load(kUniformUnigram);
  CHECK(lm.Order() == 1);
  CHECK(lm.NumContexts() == 1);
  CHECK(!lm.HasSentenceEnd());
  const int a = lm.Vocab()->Find("a");
  REQUIRE(a > 0);
  const auto [next, cost] = lm.Step(lm.Start(), a);
  CHECK(cost == doctest::Approx(0.693147190544).epsilon(1e-10));
  CHECK(next == lm.Start());
  CHECK(lm.FinalCost(next) == 0.0);
  CHECK(lm.SentenceCost({a, a}) ==
        doctest::Approx(2 * 0.693147190544).epsilon(1e-10));
}

TEST_CASE("bigram fixture follows the hand recursion") {
  const BackoffLm lm = Load(kBigram);
  CHECK(lm.Order() == 2);
  const int a = lm.Vocab()->Find("a");
  const int b = lm.Vocab()->Find("b");
  REQUIRE(a > 0);
  REQUIRE(b > 0);

  const LmState start = lm.Start();
  CHECK(lm.History(start) == std::vector<int>{lm.BosId()});

  // Seen bigram <s> a.
  auto [s_a, c_a] = lm.Step(start, a);
  CHECK(c_a == doctest::Approx(0.510825624649).epsilon(1e-10));
  CHECK(lm.History(s_a) == std::vector<int>{a});
  // Seen bigrams a a and a b.
  CHECK(lm.Step(s_a, a).second ==
        doctest::Approx(0.916290734932).epsilon(1e-10));
  auto [s_b, c_b] = lm.Step(s_a, b);
  CHECK(c_b == doctest::Approx(1.203972815193).epsilon(1e-10));
  CHECK(lm.History(s_b) == std::vector<int>{b});
  // Unseen bigram b a: b has no backoff weight, so unigram a.
  CHECK(lm.Step(s_b, a).second ==
        doctest::Approx(0.916290734932).epsilon(1e-10));
  // Unseen bigram <s> b: backoff(<s>) + unigram b.
  CHECK(lm.Step(start, b).second ==
        doctest::Approx(1.897120005737).epsilon(1e-10));
  // Final costs: a </s> backs off, b </s> backs off with weight 1.
  CHECK(lm.FinalCost(s_a) == doctest::Approx(1.609437925476).epsilon(1e-10));
  CHECK(lm.FinalCost(s_b) == doctest::Approx(1.203972815193).epsilon(1e-10));
  // Whole sentences.
  CHECK(lm.SentenceCost({a, b}) ==
        doctest::Approx(2.918771255036).epsilon(1e-10));
  CHECK(lm.SentenceCost({b, a}) ==
        doctest::Approx(4.422848666145).epsilon(1e-10));
}

TEST_CASE("malformed and structurally invalid ARPA inputs fail to load") {
  // No \data\ header.
  CHECK_THROWS_AS(Load("\\1-grams:\n-0.3 a\n\\end\\\n"), ParseError);
  // Count mismatch.
  CHECK_THROWS_AS(Load("\\data\\\nngram 1=3\n\n\\1-grams:\n-0.3 a\n-0.3 b\n"
                       "\n\\end\\\n"),
                  ParseError);
  // Bigram over a word with no unigram.
  CHECK_THROWS_AS(
      Load("\\data\\\nngram 1=1\nngram 2=1\n\n\\1-grams:\n-0.1 b\n\n"
           "\\2-grams:\n-0.2 a b\n\n\\end\\\n"),
      ParseError);
  // Trigram whose bigram history is absent.
  CHECK_THROWS_AS(
      Load("\\data\\\nngram 1=2\nngram 2=1\nngram 3=1\n\n"
           "\\1-grams:\n-0.1 a -0.1\n-0.2 b\n\n"
           "\\2-grams:\n-0.2 a a -0.1\n\n"
           "\\3-grams:\n-0.3 a b a\n\n\\end\\\n"),
      ParseError);
  // Missing \end\.
  CHECK_THROWS_AS(Load("\\data\\\nngram 1=1\n\n\\1-grams:\n-0.3 a\n"),
                  ParseError);
  // Backoff weight on a top-order gram.
  CHECK_THROWS_AS(Load("\\data\\\nngram 1=1\n\n\\1-grams:\n-0.3 a -0.1\n\n"
                       "\\end\\\n"),
                  ParseError);
  // Duplicate gram.
  CHECK_THROWS_AS(Load("\\data\\\nngram 1=2\n\n\\1-grams:\n-0.3 a\n-0.4 a\n"
                       "\n\\end\\\n"),
                  ParseError);
  // No unigrams at all.
  CHECK_THROWS_AS(Load("\\data\\\nngram 1=0\n\n\\end\\\n"), Error);
}

TEST_CASE("words missing from the model hit the <unk> policy") {
  auto vocab = std::make_shared<SymbolTable>();
  const int oov = vocab->AddSymbol("zebra");
  const BackoffLm plain = Load(kUniformUnigram, vocab);
  CHECK_THROWS_AS(plain.Step(plain.Start(), oov), OovError);

  const BackoffLm with_unk = Load(
      "\\data\\\nngram 1=3\n\n\\1-grams:\n-0.4 a\n-0.4 b\n-0.8 <unk>\n\n"
      "\\end\\\n",
      vocab);
  REQUIRE(with_unk.UnkId() > 0);
  const auto [s, cost] = with_unk.Step(with_unk.Start(), oov);
  CHECK(cost ==
        doctest::Approx(with_unk.Step(with_unk.Start(), with_unk.UnkId())
                            .second));
  CHECK(s == with_unk.Start());
}

TEST_CASE("scoring matches the independent log10 oracle on random models") {
  std::mt19937_64 rng(401);
  for (const int order : {1, 2, 3}) {
    for (unsigned seed = 1; seed <= 4; ++seed) {
      ArpaSpec spec;
      spec.order = order;
      spec.words = {"one", "two", "three", "four", "five", "six"};
      spec.seed = seed * 31 + order;
      const std::string text = RandomArpa(spec);
      const BackoffLm lm = Load(text);
      const test::ArpaOracle oracle = test::ArpaOracle::Parse(text);
      std::uniform_int_distribution<int> len(0, 8);
      std::uniform_int_distribution<std::size_t> pick(0,
                                                      spec.words.size() - 1);
      for (int iter = 0; iter < 100; ++iter) {
        std::vector<std::string> sent;
        const int n = len(rng);
        for (int i = 0; i < n; ++i) sent.push_back(spec.words[pick(rng)]);
        std::vector<int> ids;
        for (const auto &w : sent) ids.push_back(lm.Vocab()->Find(w));
        CHECK(lm.SentenceCost(ids) ==
              doctest::Approx(oracle.SentenceCost(sent)).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("generated conditionals are normalized through the backoff") {
  for (const int order : {2, 3}) {
    ArpaSpec spec;
    spec.order = order;
    spec.words = {"w1", "w2", "w3", "w4", "w5"};
    spec.seed = 7 + order;
    const BackoffLm lm = Load(RandomArpa(spec));
    std::vector<int> ids;
    for (const auto &w : spec.words) ids.push_back(lm.Vocab()->Find(w));
    // Walk a few histories; at each, the probabilities of all successors
    // (words plus </s>) must sum to one.
    std::vector<std::vector<int>> prefixes = {
        {}, {ids[0]}, {ids[1], ids[2]}, {ids[4], ids[4]}, {ids[3]}};
    for (const auto &prefix : prefixes) {
      LmState s = lm.Start();
      for (const int w : prefix) s = lm.Step(s, w).first;
      double sum = std::exp(-lm.FinalCost(s));
      for (const int w : ids) sum += std::exp(-lm.Step(s, w).second);
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("materialized unigram model is a one-state loop") {
  const BackoffLm lm = Load(kUniformUnigram);
  const Wfst g = LmToFst(lm);
  CHECK(g.NumStates() == 1);
  CHECK(g.NumArcs() == 2);
  CHECK(g.IsFinal(g.Start()));
  CHECK(g.Final(g.Start()) == DualCost::One());
}

TEST_CASE("materialized bigram scores seen sentences like the model") {
  const BackoffLm lm = Load(kBigram);
  const Wfst g = LmToFst(lm);
  const int a = lm.Vocab()->Find("a");
  const int b = lm.Vocab()->Find("b");
  // Seen path <s> a b </s>: no backoff route is cheaper, so equality.
  const Wfst sent =
      test::BuildFst(0, {{0, 1, a, a, 0.0, 0.0}, {1, 2, b, b, 0.0, 0.0}},
                     {{2, 0.0, 0.0}});
  const auto best = ShortestPath(Compose(sent, g));
  CHECK(best.cost.Total() ==
        doctest::Approx(lm.SentenceCost({a, b})).epsilon(1e-10));
}

TEST_CASE("materialized model never scores above the query interface") {
  std::mt19937_64 rng(91);
  ArpaSpec spec;
  spec.order = 2;
  spec.words = {"u", "v", "w", "x"};
  spec.seed = 13;
  const BackoffLm lm = Load(RandomArpa(spec));
  const Wfst g = LmToFst(lm);
  std::vector<int> ids;
  for (const auto &w : spec.words) ids.push_back(lm.Vocab()->Find(w));
  std::uniform_int_distribution<int> len(1, 6);
  std::uniform_int_distribution<std::size_t> pick(0, ids.size() - 1);
  for (int iter = 0; iter < 60; ++iter) {
    std::vector<test::ArcSpec> arcs;
    const int n = len(rng);
    std::vector<int> sent;
    for (int i = 0; i < n; ++i) {
      const int w = ids[pick(rng)];
      sent.push_back(w);
      arcs.push_back({i, i + 1, w, w, 0.0, 0.0});
    }
    const Wfst acceptor = test::BuildFst(0, arcs, {{n, 0.0, 0.0}});
    const auto best = ShortestPath(Compose(acceptor, g));
    CHECK(best.cost.Total() <= lm.SentenceCost(sent) + 1e-9);
  }
}

TEST_CASE("materializing a model with no regular words fails") {
  const BackoffLm lm = Load(
      "\\data\\\nngram 1=2\n\n\\1-grams:\n-0.3 <s>\n-0.3 </s>\n\n\\end\\\n");
  CHECK_THROWS_AS(LmToFst(lm), Error);
}

TEST_CASE("shared symbol table keeps ids stable across models") {
  auto vocab = std::make_shared<SymbolTable>();
  const BackoffLm g1 = Load(kUniformUnigram, vocab);
  const BackoffLm g2 = Load(kBigram, vocab);
  CHECK(g1.Vocab() == g2.Vocab());
  CHECK(g1.Vocab()->Find("a") == g2.Vocab()->Find("a"));
  const int a = vocab->Find("a");
  CHECK(g1.HasWord(a));
  CHECK(g2.HasWord(a));
}
