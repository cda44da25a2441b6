// latdec/tests/lattice-tools-test.cc

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

#include <limits>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "latdec/decoder-core.h"
#include "latdec/fixtures.h"
#include "latdec/lattice-tools.h"
#include "latdec/lattice.h"
#include "latdec/paths.h"
#include "test-util.h"

using namespace latdec;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

DecodeOptions NoPrune() {
  DecodeOptions o;
  o.beam = kInf;
  o.lattice_beam = 1e30;
  o.max_active = std::numeric_limits<int>::max();
  o.prune_interval = 1 << 28;
  return o;
}

std::shared_ptr<const BackoffLm> Load(const std::string &text,
                                      std::shared_ptr<SymbolTable> vocab) {
  std::istringstream in(text);
  return std::make_shared<BackoffLm>(BackoffLm::LoadArpa(in, std::move(vocab)));
}

}  // namespace

TEST_CASE("identity rescoring changes nothing") {
  FixtureSpec fs;
  fs.num_words = 3;
  fs.seed = 21;
  const DecodingFixture fx = MakeDecodingFixture(fs);
  const SynthesisResult synth = SynthesizeLogLikes(fx.graph, 21, 1.0);

  auto [lat, stats] = Decode(fx.graph, synth.loglikes, NoPrune());
  const auto copy = Load(fx.small_arpa, fx.vocab);
  const ResidualGrammar f(fx.small_lm, copy);
  const Lattice rescored = RescoreLattice(lat, f);

  std::string msg;
  CHECK_MESSAGE(test::SamePathMultiset(EnumeratePaths(rescored.fst, 100000),
                                       EnumeratePaths(lat.fst, 100000), 0.0,
                                       &msg),
                msg);
  CHECK(rescored.num_frames == lat.num_frames);
}

TEST_CASE("single-path rescoring shifts by the sentence score difference") {
  const FlipFixture flip = MakeFlipFixture();
  const DecodingFixture &fx = flip.fixture;
  const int a = fx.vocab->Find("a");
  const int c = fx.vocab->Find("c");

  // One path spelling "a c": word labels ride the first phone arcs.
  Lattice lat;
  lat.num_frames = 4;
  lat.fst = test::BuildFst(0,
                           {{0, 1, 1, a, 0.5, 1.0},
                            {1, 2, 4, 0, 0.25, 2.0},
                            {2, 3, 3, c, 1.5, 0.5},
                            {3, 4, 6, 0, 0.75, 1.25}},
                           {{4, 0.1, 0.0}});

  const ResidualGrammar f(fx.small_lm, fx.large_lm);
  const Lattice rescored = RescoreLattice(lat, f);
  const auto before = EnumeratePaths(lat.fst, 10);
  const auto after = EnumeratePaths(rescored.fst, 10);
  REQUIRE(before.size() == 1);
  REQUIRE(after.size() == 1);

  const auto small = test::ArpaOracle::Parse(fx.small_arpa);
  const auto large = test::ArpaOracle::Parse(fx.large_arpa);
  const double shift =
      large.SentenceCost({"a", "c"}) - small.SentenceCost({"a", "c"});
  CHECK(after[0].cost.graph - before[0].cost.graph ==
        doctest::Approx(shift).epsilon(1e-9));
  CHECK(after[0].cost.acoustic == before[0].cost.acoustic);
  CHECK(after[0].olabels == before[0].olabels);
}

TEST_CASE("full-beam rescoring equals on-the-fly biglm decoding") {
  for (const unsigned seed : {71u, 73u}) {
    CAPTURE(seed);
    FixtureSpec fs;
    fs.num_words = 3;
    fs.seed = seed;
    const DecodingFixture fx = MakeDecodingFixture(fs);
    const ResidualGrammar f(fx.small_lm, fx.large_lm);
    const BigLmGraph graph{&fx.graph, &f};
    const std::vector<int> ilabels =
        test::LexiconIlabels(3, 0, {1 + static_cast<int>(seed) % 3, 2, 3});
    const SynthesisResult synth =
        SynthesizeLogLikes(fx.graph, seed, 1.0, &ilabels);

    auto [base_lat, base_stats] = Decode(fx.graph, synth.loglikes, NoPrune());
    const Lattice rescored = RescoreLattice(base_lat, f);
    auto [big_lat, big_stats] = DecodeBigLm(graph, synth.loglikes, NoPrune());

    std::string msg;
    CHECK_MESSAGE(test::SamePathMultiset(EnumeratePaths(rescored.fst, 200000),
                                         EnumeratePaths(big_lat.fst, 200000),
                                         1e-9, &msg),
                  msg);
    const BestPath pr = LatticeBestPath(rescored);
    const BestPath pg = LatticeBestPath(big_lat);
    CHECK(pr.words == pg.words);
    CHECK(pr.cost.Total() == doctest::Approx(pg.cost.Total()).epsilon(1e-9));
  }
}

TEST_CASE("tight beams favor on-the-fly rescoring over the pipeline") {
  const FlipFixture flip = MakeFlipFixture();
  const DecodingFixture &fx = flip.fixture;
  const ResidualGrammar f(fx.small_lm, fx.large_lm);
  const BigLmGraph graph{&fx.graph, &f};

  // The unigram penalizes "c" by 2.75 * ln 10 > 6 nats mid-word, so a
  // beam-6 first pass never keeps the path rescoring would need; decoding
  // against the residual directly re-ranks before the beam bites.
  DecodeOptions tight;
  tight.beam = 6.0;
  tight.lattice_beam = 4.0;

  auto [base_lat, base_stats] = Decode(fx.graph, flip.loglikes, tight);
  const WerResult wer_rescore =
      ComputeWer(flip.ref_words, LatticeBestPath(RescoreLattice(base_lat, f)).words);
  auto [big_lat, big_stats] = DecodeBigLm(graph, flip.loglikes, tight);
  const WerResult wer_big =
      ComputeWer(flip.ref_words, LatticeBestPath(big_lat).words);

  CHECK(wer_big.percent == 0.0);
  CHECK(wer_rescore.percent > 0.0);
  CHECK(wer_big.percent <= wer_rescore.percent);
}

TEST_CASE("avg loglike is the best path cost per frame") {
  Lattice lat;
  lat.num_frames = 1;
  lat.fst = test::BuildFst(0, {{0, 1, 1, 1, 0.5, 1.2}}, {{1, 0.0, 0.0}});
  CHECK(AvgLogLike(lat, 1) == doctest::Approx(-1.7).epsilon(1e-12));
  CHECK(AvgLogLike(lat, 2) == doctest::Approx(-0.85).epsilon(1e-12));
  CHECK_THROWS_AS(AvgLogLike(lat, 0), Error);

  Lattice empty;
  CHECK_THROWS_AS(AvgLogLike(empty, 1), NoPathError);
}

TEST_CASE("wer counts the textbook alignments") {
  const WerResult same = ComputeWer({1, 2, 3}, {1, 2, 3});
  CHECK(same.Edits() == 0);
  CHECK(same.percent == 0.0);
  CHECK(!same.degenerate);

  const WerResult dels = ComputeWer({1, 2, 3}, {});
  CHECK(dels.deletions == 3);
  CHECK(dels.substitutions == 0);
  CHECK(dels.insertions == 0);
  CHECK(dels.percent == doctest::Approx(100.0));

  // ref "a b c" vs hyp "a x c d": one substitution plus one insertion.
  const WerResult mixed = ComputeWer({1, 2, 3}, {1, 9, 3, 4});
  CHECK(mixed.substitutions == 1);
  CHECK(mixed.deletions == 0);
  CHECK(mixed.insertions == 1);
  CHECK(mixed.percent == doctest::Approx(200.0 / 3).epsilon(1e-12));

  // Swapped words align as two substitutions, not delete+match+insert.
  const WerResult swap = ComputeWer({1, 2}, {2, 1});
  CHECK(swap.substitutions == 2);
  CHECK(swap.deletions == 0);
  CHECK(swap.insertions == 0);
}

TEST_CASE("wer handles empty references explicitly") {
  const WerResult both = ComputeWer({}, {});
  CHECK(both.Edits() == 0);
  CHECK(both.percent == 0.0);
  CHECK(!both.degenerate);

  const WerResult hyp_only = ComputeWer({}, {5, 6});
  CHECK(hyp_only.insertions == 2);
  CHECK(hyp_only.percent == doctest::Approx(200.0));
  CHECK(hyp_only.degenerate);
}

TEST_CASE("wer edit totals are symmetric") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> len(0, 6);
  std::uniform_int_distribution<int> word(1, 3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> r(len(rng)), h(len(rng));
    for (int &w : r) w = word(rng);
    for (int &w : h) w = word(rng);
    CAPTURE(trial);
    CHECK(ComputeWer(r, h).Edits() == ComputeWer(h, r).Edits());
  }
}
