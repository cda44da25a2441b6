// latdec/tests/loglikes-test.cc

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

#include <sstream>

#include "latdec/loglikes.h"
#include "test-util.h"

using namespace latdec;

TEST_CASE("acoustic cost negates and scales") {
  LogLikelihoods ll;
  ll.num_frames = 1;
  ll.num_labels = 2;
  ll.values = {{0.0, -2.3}};
  CHECK(AcousticCost(ll, 0, 1, 1.0) == 0.0);
  CHECK(AcousticCost(ll, 0, 2, 1.0) == doctest::Approx(2.3));
  CHECK(AcousticCost(ll, 0, 2, 0.5) == doctest::Approx(1.15));
  CHECK(AcousticCost(ll, 0, 2, 0.0) == 0.0);
  CHECK_THROWS_AS(AcousticCost(ll, 1, 1, 1.0), Error);
  CHECK_THROWS_AS(AcousticCost(ll, 0, 0, 1.0), Error);
  CHECK_THROWS_AS(AcousticCost(ll, 0, 3, 1.0), Error);
}

TEST_CASE("csv round trip") {
  LogLikelihoods ll;
  ll.num_frames = 2;
  ll.num_labels = 3;
  ll.values = {{0.25, -1.5, -4.0}, {-0.125, 0.0, -2.25}};
  std::ostringstream out;
  WriteLogLikes(ll, out);
  std::istringstream in(out.str());
  const LogLikelihoods back = ReadLogLikes(in);
  CHECK(back.num_frames == 2);
  CHECK(back.num_labels == 3);
  CHECK(back.values == ll.values);

  std::istringstream tiny("1,1\n-0.5\n");
  const LogLikelihoods one = ReadLogLikes(tiny);
  CHECK(one.values[0][0] == -0.5);
}

TEST_CASE("malformed csv files are rejected") {
  auto parse = [](const std::string &s) {
    std::istringstream in(s);
    return ReadLogLikes(in);
  };
  CHECK_THROWS_AS(parse(""), ParseError);                    // no counts
  CHECK_THROWS_AS(parse("2,2\n0,0\n"), ParseError);          // missing row
  CHECK_THROWS_AS(parse("1,2\n0,0\n0,0\n"), ParseError);     // extra row
  CHECK_THROWS_AS(parse("1,2\n0,0,0\n"), ParseError);        // ragged
  CHECK_THROWS_AS(parse("1,1\ninf\n"), ParseError);          // non-finite
  CHECK_THROWS_AS(parse("1,1\nnan\n"), ParseError);          // non-finite
  CHECK_THROWS_AS(parse("1,x\n0\n"), ParseError);            // bad count
}

TEST_CASE("synthesis is deterministic and separates the true path") {
  // Two-word loop: labels 1 and 2 emit, words 10 and 20.
  const Wfst graph = test::BuildFst(0,
                                    {{0, 1, 1, 10, 0.5, 0.0},
                                     {0, 1, 2, 20, 0.5, 0.0},
                                     {1, 0, 3, 0, 0.0, 0.0}},
                                    {{1, 0.0, 0.0}});
  const auto a = SynthesizeLogLikes(graph, 42, 1.5);
  const auto b = SynthesizeLogLikes(graph, 42, 1.5);
  CHECK(a.loglikes.values == b.loglikes.values);
  CHECK(a.words == b.words);
  REQUIRE(a.loglikes.num_frames > 0);
  CHECK(a.loglikes.num_labels == 3);
  CHECK(a.ilabels.size() == static_cast<std::size_t>(a.loglikes.num_frames));

  const auto c = SynthesizeLogLikes(graph, 43, 1.5);
  CHECK(a.loglikes.values != c.loglikes.values);  // other seed, other draw
}

TEST_CASE("sigma zero puts the true label exactly four nats ahead") {
  const Wfst graph = test::BuildFst(
      0, {{0, 1, 2, 7, 0.0, 0.0}, {1, 2, 1, 9, 0.0, 0.0}}, {{2, 0.0, 0.0}});
  const auto r = SynthesizeLogLikes(graph, 5, 0.0);
  REQUIRE(r.loglikes.num_frames == 2);
  REQUIRE(r.loglikes.num_labels == 2);
  CHECK(r.ilabels == std::vector<int>{2, 1});
  CHECK(r.words == std::vector<int>{7, 9});
  CHECK(r.loglikes.values[0][1] == 0.0);   // label 2 on frame 0
  CHECK(r.loglikes.values[0][0] == -4.0);
  CHECK(r.loglikes.values[1][0] == 0.0);   // label 1 on frame 1
  CHECK(r.loglikes.values[1][1] == -4.0);
}

TEST_CASE("an explicit true path pins the sampled labels and words") {
  const Wfst graph = test::BuildFst(0,
                                    {{0, 1, 1, 10, 0.5, 0.0},
                                     {0, 1, 2, 20, 0.5, 0.0},
                                     {1, 0, 3, 0, 0.0, 0.0}},
                                    {{1, 0.0, 0.0}});
  const std::vector<int> want = {2, 3, 1, 3, 2};
  const auto r = SynthesizeLogLikes(graph, 1, 0.0, &want);
  CHECK(r.ilabels == want);
  CHECK(r.words == std::vector<int>{20, 10, 20});

  const std::vector<int> impossible = {3, 3};
  CHECK_THROWS_AS(SynthesizeLogLikes(graph, 1, 0.0, &impossible), Error);
}

TEST_CASE("graphs without usable paths fail") {
  Wfst empty;
  CHECK_THROWS_AS(SynthesizeLogLikes(empty, 1, 0.0), Error);
  // Only the empty path is accepting: the walk needs at least one frame.
  const Wfst trivial = test::BuildFst(0, {}, {{0, 0.0, 0.0}});
  CHECK_THROWS_AS(SynthesizeLogLikes(trivial, 1, 0.0), Error);
}
