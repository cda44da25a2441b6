// latdec/loglikes.cc

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

#include "latdec/loglikes.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <unordered_set>

#include "latdec/util.h"

namespace latdec {

namespace {
constexpr double kNoiseMargin = 4.0;
}

double AcousticCost(const LogLikelihoods &ll, int frame, int ilabel,
                    double scale) {
  if (frame < 0 || frame >= ll.num_frames)
    throw Error(StrCat("acoustic_cost: frame ", frame, " outside [0, ",
                       ll.num_frames, ")"));
  if (ilabel < 1 || ilabel > ll.num_labels)
    throw Error(StrCat("acoustic_cost: label ", ilabel, " outside [1, ",
                       ll.num_labels, "]"));
  return -scale * ll.values[frame][ilabel - 1];
}

LogLikelihoods ReadLogLikes(std::istream &in) {
  LogLikelihoods ll;
  std::string line;
  if (!std::getline(in, line))
    throw ParseError("loglikes: missing count row");
  {
    const auto counts = SplitChar(TrimWhitespace(line), ',');
    if (counts.size() != 2)
      throw ParseError("loglikes: count row must be \"frames,labels\"");
    const long t = ParseInt(counts[0], "frame count");
    const long l = ParseInt(counts[1], "label count");
    if (t < 0 || l < 0 || t > 1000000 || l > 1000000)
      throw ParseError("loglikes: counts out of range");
    ll.num_frames = static_cast<int>(t);
    ll.num_labels = static_cast<int>(l);
  }
  ll.values.reserve(ll.num_frames);
  int row = 0;
  while (std::getline(in, line)) {
    const auto trimmed = TrimWhitespace(line);
    if (trimmed.empty()) continue;
    if (row == ll.num_frames)
      throw ParseError("loglikes: more rows than the declared frame count");
    const auto fields = SplitChar(trimmed, ',');
    if (static_cast<int>(fields.size()) != ll.num_labels)
      throw ParseError(StrCat("loglikes: row ", row, " has ", fields.size(),
                              " values, expected ", ll.num_labels));
    std::vector<double> vals(fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i) {
      vals[i] = ParseDouble(fields[i], "loglike");
      if (!std::isfinite(vals[i]))
        throw ParseError(StrCat("loglikes: non-finite value in row ", row));
    }
    ll.values.push_back(std::move(vals));
    ++row;
  }
  if (row != ll.num_frames)
    throw ParseError(StrCat("loglikes: declared ", ll.num_frames,
                            " frames, found ", row));
  return ll;
}

LogLikelihoods ReadLogLikesFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(StrCat("cannot open loglikes: ", path));
  return ReadLogLikes(in);
}

void WriteLogLikes(const LogLikelihoods &ll, std::ostream &out) {
  out << ll.num_frames << ',' << ll.num_labels << '\n';
  char buf[64];
  for (const auto &row : ll.values) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      if (i) line += ',';
      line += buf;
    }
    line += '\n';
    out << line;
  }
}

void WriteLogLikesFile(const LogLikelihoods &ll, const std::string &path) {
  std::ofstream out(path);
  if (!out) throw Error(StrCat("cannot write loglikes: ", path));
  WriteLogLikes(ll, out);
}

namespace {

struct SampledPath {
  std::vector<int> ilabels;
  std::vector<int> olabels;
};

// Uniform random walk that stops at finals with fixed probability. Restarts
// on dead ends, empty yields, or runaway walks; the graph is expected to be
// trimmed, so a handful of attempts is plenty.
SampledPath RandomWalk(const Wfst &graph, std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    SampledPath path;
    int s = graph.Start();
    for (int steps = 0; steps < 10000; ++steps) {
      const auto &arcs = graph.ArcsAt(s);
      if (graph.IsFinal(s)) {
        if (arcs.empty() || unit(rng) < 0.25) break;
      } else if (arcs.empty()) {
        path.ilabels.clear();  // dead end; force a restart
        break;
      }
      const auto &arc =
          arcs[std::uniform_int_distribution<std::size_t>(
              0, arcs.size() - 1)(rng)];
      if (arc.ilabel != 0) path.ilabels.push_back(arc.ilabel);
      if (arc.olabel != 0) path.olabels.push_back(arc.olabel);
      s = arc.next_state;
    }
    if (!path.ilabels.empty() && graph.IsFinal(s)) return path;
  }
  throw Error("synthesize_loglikes: no usable accepting path found");
}

// Accepting path whose emitting ilabels equal `want`, by depth-first search
// over (state, consumed) pairs. Epsilon moves stay on the same frame; the
// graph has no epsilon-input cycles, so the search terminates.
SampledPath MatchPath(const Wfst &graph, const std::vector<int> &want) {
  struct Frame {
    int state;
    std::size_t pos;
    std::size_t arc_idx;
  };
  const auto key = [&](int s, std::size_t pos) {
    return static_cast<std::uint64_t>(pos) * graph.NumStates() + s;
  };
  std::unordered_set<std::uint64_t> visited;
  std::vector<Frame> stack{{graph.Start(), 0, 0}};
  visited.insert(key(graph.Start(), 0));
  std::vector<const Arc *> taken;
  while (!stack.empty()) {
    Frame &top = stack.back();
    if (top.pos == want.size() && graph.IsFinal(top.state)) break;
    const auto &arcs = graph.ArcsAt(top.state);
    bool advanced = false;
    while (top.arc_idx < arcs.size()) {
      const Arc &arc = arcs[top.arc_idx++];
      const bool emitting = arc.ilabel != 0;
      if (emitting &&
          (top.pos == want.size() || arc.ilabel != want[top.pos]))
        continue;
      const std::size_t next_pos = top.pos + (emitting ? 1 : 0);
      if (!visited.insert(key(arc.next_state, next_pos)).second) continue;
      taken.push_back(&arc);
      stack.push_back({arc.next_state, next_pos, 0});
      advanced = true;
      break;
    }
    if (!advanced && !(top.pos == want.size() && graph.IsFinal(top.state))) {
      stack.pop_back();
      if (!taken.empty()) taken.pop_back();
    }
  }
  if (stack.empty())
    throw Error("synthesize_loglikes: no accepting path matches true_path");
  SampledPath path;
  for (const Arc *arc : taken) {
    if (arc->ilabel != 0) path.ilabels.push_back(arc->ilabel);
    if (arc->olabel != 0) path.olabels.push_back(arc->olabel);
  }
  return path;
}

}  // namespace

SynthesisResult SynthesizeLogLikes(const Wfst &graph, std::uint64_t seed,
                                   double noise_sigma,
                                   const std::vector<int> *true_path) {
  if (graph.Empty()) throw Error("synthesize_loglikes: empty graph");
  std::mt19937_64 rng(seed);
  const SampledPath path =
      true_path ? MatchPath(graph, *true_path) : RandomWalk(graph, rng);

  SynthesisResult out;
  out.ilabels = path.ilabels;
  out.words = path.olabels;
  out.loglikes.num_frames = static_cast<int>(path.ilabels.size());
  out.loglikes.num_labels = graph.MaxILabel();
  std::normal_distribution<double> noise(0.0,
                                         noise_sigma > 0 ? noise_sigma : 1.0);
  auto &values = out.loglikes.values;
  values.assign(out.loglikes.num_frames,
                std::vector<double>(out.loglikes.num_labels, 0.0));
  for (int t = 0; t < out.loglikes.num_frames; ++t) {
    for (int j = 0; j < out.loglikes.num_labels; ++j) {
      const double mean = (j + 1 == path.ilabels[t]) ? 0.0 : -kNoiseMargin;
      values[t][j] = mean + (noise_sigma > 0 ? noise(rng) : 0.0);
    }
  }
  return out;
}

}  // namespace latdec
