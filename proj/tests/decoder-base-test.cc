// latdec/tests/decoder-base-test.cc

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
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "latdec/decoder-core.h"
#include "latdec/fixtures.h"
#include "latdec/lattice.h"
#include "latdec/paths.h"
#include "test-util.h"

using namespace latdec;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Pruning disabled: infinite beam, a huge but finite lattice beam (the
// options check wants beam strictly wider), and no mid-decode prune.
DecodeOptions NoPrune() {
  DecodeOptions o;
  o.beam = kInf;
  o.lattice_beam = 1e30;
  o.max_active = std::numeric_limits<int>::max();
  o.prune_interval = 1 << 28;
  return o;
}

LogLikelihoods OneFrame(std::vector<double> row) {
  LogLikelihoods ll;
  ll.num_frames = 1;
  ll.num_labels = static_cast<int>(row.size());
  ll.values = {std::move(row)};
  return ll;
}

}  // namespace

TEST_CASE("single emitting arc yields the expected one-path lattice") {
  const Wfst graph = test::BuildFst(0, {{0, 1, 1, 7, 0.5, 0.0}}, {{1}});
  const LogLikelihoods ll = OneFrame({-1.2});

  LatticeDecoder dec(graph, NoPrune());
  auto [lat, stats] = dec.Decode(ll);

  CHECK(lat.num_frames == 1);
  const auto paths = EnumeratePaths(lat.fst, 10);
  REQUIRE(paths.size() == 1);
  CHECK(paths[0].cost.graph == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(paths[0].cost.acoustic == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(paths[0].ilabels == std::vector<int>{1});
  CHECK(paths[0].olabels == std::vector<int>{7});

  const BestPath best = LatticeBestPath(lat);
  CHECK(best.cost.Total() == doctest::Approx(1.7).epsilon(1e-12));
  CHECK(best.words == std::vector<int>{7});
  CHECK(best.ilabels == std::vector<int>{1});

  CHECK(stats.propagations == 1);
  CHECK(stats.tokens_per_frame == std::vector<int>{1, 1});
  CHECK(stats.wall_seconds >= 0.0);
}

TEST_CASE("full-beam lattice equals the composed search space") {
  for (const unsigned seed : {1u, 2u, 3u, 4u, 5u}) {
    CAPTURE(seed);
    FixtureSpec fs;
    fs.num_words = 3;
    fs.seed = seed;
    const DecodingFixture fx = MakeDecodingFixture(fs);

    std::mt19937_64 rng(seed * 7 + 1);
    std::uniform_int_distribution<int> len(1, 4), word(1, 3);
    std::vector<int> ks;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) ks.push_back(word(rng));
    const std::vector<int> ilabels = test::LexiconIlabels(3, 0, ks);
    const SynthesisResult synth =
        SynthesizeLogLikes(fx.graph, seed, 1.0, &ilabels);

    LatticeDecoder dec(fx.graph, NoPrune());
    auto [lat, stats] = dec.Decode(synth.loglikes);
    const auto got = EnumeratePaths(lat.fst, 200000);
    const auto want = test::OracleSearchPaths(fx.graph, synth.loglikes, 1.0);
    std::string msg;
    CHECK_MESSAGE(test::SamePathMultiset(got, want, 1e-9, &msg), msg);
    CHECK(stats.propagations > 0);
  }
}

TEST_CASE("full-beam lattice equality holds with backoff epsilons") {
  for (const unsigned seed : {6u, 7u, 8u}) {
    CAPTURE(seed);
    FixtureSpec fs;
    fs.num_words = 3;
    fs.small_order = 2;  // the graph now has epsilon backoff arcs
    fs.seed = seed;
    const DecodingFixture fx = MakeDecodingFixture(fs);

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> word(1, 3);
    std::vector<int> ks = {word(rng), word(rng), word(rng)};
    const std::vector<int> ilabels = test::LexiconIlabels(3, 0, ks);
    const SynthesisResult synth =
        SynthesizeLogLikes(fx.graph, seed + 100, 1.0, &ilabels);

    DecodeOptions opts = NoPrune();
    opts.acoustic_scale = 0.5;
    LatticeDecoder dec(fx.graph, opts);
    auto [lat, stats] = dec.Decode(synth.loglikes);
    const auto got = EnumeratePaths(lat.fst, 200000);
    const auto want = test::OracleSearchPaths(fx.graph, synth.loglikes, 0.5);
    std::string msg;
    CHECK_MESSAGE(test::SamePathMultiset(got, want, 1e-9, &msg), msg);
  }
}

TEST_CASE("noise-free decoding recovers the generating word sequence") {
  for (const unsigned seed : {11u, 12u, 13u, 14u}) {
    CAPTURE(seed);
    FixtureSpec fs;
    fs.num_words = 4;
    fs.seed = seed;
    const DecodingFixture fx = MakeDecodingFixture(fs);
    const SynthesisResult synth = SynthesizeLogLikes(fx.graph, seed, 0.0);

    LatticeDecoder dec(fx.graph, DecodeOptions());
    auto [lat, stats] = dec.Decode(synth.loglikes);
    CHECK(LatticeBestPath(lat).words == synth.words);
    CHECK(static_cast<int>(stats.tokens_per_frame.size()) ==
          synth.loglikes.num_frames + 1);
  }
}

TEST_CASE("wider beams never worsen the best path") {
  FixtureSpec fs;
  fs.num_words = 4;
  fs.seed = 21;
  const DecodingFixture fx = MakeDecodingFixture(fs);
  const SynthesisResult synth = SynthesizeLogLikes(fx.graph, 99, 3.0);

  std::vector<double> totals;
  for (const double beam : {2.0, 4.0, 8.0, 16.0, 1e9}) {
    DecodeOptions o;
    o.beam = beam;
    o.lattice_beam = 1.9;
    o.max_active = std::numeric_limits<int>::max();
    try {
      LatticeDecoder dec(fx.graph, o);
      auto [lat, stats] = dec.Decode(synth.loglikes);
      totals.push_back(LatticeBestPath(lat).cost.Total());
    } catch (const DecodeError &) {
      totals.push_back(kInf);  // a legitimate outcome at tight beams
    }
  }
  for (std::size_t i = 0; i + 1 < totals.size(); ++i)
    CHECK(totals[i + 1] <= totals[i] + 1e-9);
  REQUIRE(std::isfinite(totals.back()));

  // At an effectively infinite beam the best path is the true optimum.
  const PathResult want =
      ShortestPath(Compose(test::UtteranceFst(synth.loglikes, 1.0), fx.graph));
  CHECK(totals.back() == doctest::Approx(want.cost.Total()).epsilon(1e-9));
}

TEST_CASE("histogram pruning to one active token tracks the clean path") {
  FixtureSpec fs;
  fs.num_words = 4;
  fs.seed = 31;
  const DecodingFixture fx = MakeDecodingFixture(fs);
  const SynthesisResult synth = SynthesizeLogLikes(fx.graph, 31, 0.0);

  DecodeOptions o;
  o.beam = 1e9;
  o.lattice_beam = 8.0;
  o.max_active = 1;
  LatticeDecoder dec(fx.graph, o);
  auto [lat, stats] = dec.Decode(synth.loglikes);
  CHECK(LatticeBestPath(lat).words == synth.words);
  for (const int count : stats.tokens_per_frame) CHECK(count >= 1);
}

TEST_CASE("default pruning keeps the full-beam best path") {
  for (const unsigned seed : {51u, 52u}) {
    CAPTURE(seed);
    FixtureSpec fs;
    fs.num_words = 4;
    fs.seed = seed;
    const DecodingFixture fx = MakeDecodingFixture(fs);
    const std::vector<int> ilabels =
        test::LexiconIlabels(4, 0, {2, 4, 1, 3});
    const SynthesisResult synth =
        SynthesizeLogLikes(fx.graph, seed, 1.0, &ilabels);

    LatticeDecoder full(fx.graph, NoPrune());
    auto [flat, fstats] = full.Decode(synth.loglikes);
    LatticeDecoder pruned(fx.graph, DecodeOptions());
    auto [plat, pstats] = pruned.Decode(synth.loglikes);

    const BestPath a = LatticeBestPath(flat);
    const BestPath b = LatticeBestPath(plat);
    CHECK(a.words == b.words);
    CHECK(a.cost.Total() == doctest::Approx(b.cost.Total()).epsilon(1e-9));
    CHECK(pstats.propagations <= fstats.propagations);
  }
}

TEST_CASE("lattice beam boundary: slack equal to the beam survives") {
  // Four parallel arcs whose link slacks are exactly 0, beam - 1e-6, beam,
  // and beam + 1e-9; the last must be cut, the rest kept.
  const double L = 8.0;
  const Wfst graph = test::BuildFst(0,
                                    {{0, 1, 1, 1, 0.0, 0.0},
                                     {0, 1, 1, 2, L - 1e-6, 0.0},
                                     {0, 1, 1, 3, L, 0.0},
                                     {0, 1, 1, 4, L + 1e-9, 0.0},
                                     {0, 2, 1, 5, 20.0, 0.0}},
                                    {{1}, {2}});
  const LogLikelihoods ll = OneFrame({0.0});

  DecodeOptions o = NoPrune();
  o.lattice_beam = L;
  LatticeDecoder dec(graph, o);
  dec.InitDecoding(ll);
  while (!dec.Done()) dec.AdvanceFrame();
  const int deleted = dec.PruneActiveTokens(true);
  CHECK(deleted >= 1);  // the cost-20 branch token dies
  CHECK(dec.PruneActiveTokens(true) == 0);  // pruning is idempotent

  const Lattice lat = dec.Finalize();
  auto paths = EnumeratePaths(lat.fst, 10);
  std::vector<int> kept;
  for (const auto &p : paths) {
    REQUIRE(p.olabels.size() == 1);
    kept.push_back(p.olabels[0]);
  }
  std::sort(kept.begin(), kept.end());
  CHECK(kept == std::vector<int>{1, 2, 3});
}

TEST_CASE("repeated decodes are bit-identical") {
  FixtureSpec fs;
  fs.num_words = 4;
  fs.seed = 41;
  const DecodingFixture fx = MakeDecodingFixture(fs);
  const SynthesisResult synth = SynthesizeLogLikes(fx.graph, 41, 2.0);

  LatticeDecoder d1(fx.graph, DecodeOptions());
  auto [lat1, st1] = d1.Decode(synth.loglikes);
  LatticeDecoder d2(fx.graph, DecodeOptions());
  auto [lat2, st2] = d2.Decode(synth.loglikes);

  CHECK(st1.propagations == st2.propagations);
  CHECK(st1.tokens_per_frame == st2.tokens_per_frame);
  const BestPath b1 = LatticeBestPath(lat1);
  const BestPath b2 = LatticeBestPath(lat2);
  CHECK(b1.words == b2.words);
  CHECK(b1.cost.graph == b2.cost.graph);
  CHECK(b1.cost.acoustic == b2.cost.acoustic);
  std::string msg;
  CHECK_MESSAGE(test::SamePathMultiset(EnumeratePaths(lat1.fst, 100000),
                                       EnumeratePaths(lat2.fst, 100000), 0.0,
                                       &msg),
                msg);
}

TEST_CASE("running out of graph raises a decode error with partial stats") {
  const Wfst graph = test::BuildFst(0, {{0, 1, 1, 0, 0.0, 0.0}}, {{1}});
  LogLikelihoods ll;
  ll.num_frames = 2;
  ll.num_labels = 1;
  ll.values = {{0.0}, {0.0}};

  LatticeDecoder dec(graph, NoPrune());
  try {
    dec.Decode(ll);
    FAIL("expected DecodeError");
  } catch (const DecodeError &e) {
    CHECK(std::string(e.what()).find("no token survives to frame 2") !=
          std::string::npos);
    CHECK(e.Stats().tokens_per_frame == std::vector<int>{1, 1, 0});
  }
}

TEST_CASE("ending off a final state raises a decode error") {
  const Wfst graph = test::BuildFst(
      0, {{0, 1, 1, 0, 0.0, 0.0}, {1, 2, 1, 0, 0.0, 0.0}}, {{2}});
  const LogLikelihoods ll = OneFrame({0.0});  // stops at non-final state 1

  LatticeDecoder dec(graph, NoPrune());
  try {
    dec.Decode(ll);
    FAIL("expected DecodeError");
  } catch (const DecodeError &e) {
    CHECK(std::string(e.what()).find("final") != std::string::npos);
    CHECK(e.Stats().tokens_per_frame == std::vector<int>{1, 1});
  }
}

TEST_CASE("likelihood matrix narrower than the graph labels is an error") {
  const Wfst graph = test::BuildFst(
      0, {{0, 1, 3, 0, 0.0, 0.0}}, {{1}});
  const LogLikelihoods ll = OneFrame({0.0});  // 1 label, graph needs 3
  LatticeDecoder dec(graph, NoPrune());
  CHECK_THROWS_AS(dec.Decode(ll), Error);
}

TEST_CASE("survival curve of a single-path decode is flat ones") {
  const Wfst graph = test::BuildFst(0,
                                    {{0, 1, 1, 1, 0.1, 0.0},
                                     {1, 2, 1, 0, 0.2, 0.0},
                                     {2, 3, 1, 2, 0.3, 0.0}},
                                    {{3}});
  LogLikelihoods ll;
  ll.num_frames = 3;
  ll.num_labels = 1;
  ll.values = {{-0.5}, {-0.5}, {-0.5}};

  LatticeDecoder dec(graph, NoPrune());
  dec.InitDecoding(ll);
  while (!dec.Done()) dec.AdvanceFrame();
  const std::vector<double> curve = dec.SurvivalCurve(3);
  REQUIRE(curve.size() == 4);
  for (const double v : curve) CHECK(v == doctest::Approx(1.0));
}

TEST_CASE("decode rejects an empty likelihood matrix gracefully") {
  const Wfst graph = test::BuildFst(0, {{0, 1, 1, 1, 0.0, 0.0}}, {{0}, {1}});
  LogLikelihoods ll;
  ll.num_frames = 0;
  ll.num_labels = 1;

  // Zero frames: the start state is final, so the lattice is a point.
  LatticeDecoder dec(graph, NoPrune());
  auto [lat, stats] = dec.Decode(ll);
  CHECK(lat.num_frames == 0);
  const auto paths = EnumeratePaths(lat.fst, 10);
  REQUIRE(paths.size() == 1);
  CHECK(paths[0].olabels.empty());
}
