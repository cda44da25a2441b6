// latdec/lattice.cc

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

#include "latdec/lattice.h"

#include <algorithm>
#include <vector>

#include "latdec/paths.h"
#include "latdec/util.h"

namespace latdec {

BestPath LatticeBestPath(const Lattice &lat) {
  PathResult p = ShortestPath(lat.fst);
  BestPath best;
  best.cost = p.cost;
  best.words = std::move(p.olabels);
  best.ilabels = std::move(p.ilabels);
  return best;
}

namespace internal {

std::vector<double> SurvivalFromGraph(
    const std::vector<int> &frame_of,
    const std::vector<std::vector<int>> &succ, int num_frames,
    int max_offset) {
  if (max_offset < 0) throw Error("survival curve: negative max_offset");
  const int n = static_cast<int>(frame_of.size());
  std::vector<std::vector<int>> pred(n);
  std::vector<std::vector<int>> by_frame(num_frames + 1);
  for (int u = 0; u < n; ++u) {
    by_frame[frame_of[u]].push_back(u);
    for (int v : succ[u]) pred[v].push_back(u);
  }

  std::vector<double> sums(max_offset + 1, 0.0);
  std::vector<int> mark(n, -1);
  std::vector<int> stack;
  for (int t = 0; t <= num_frames; ++t) {
    // Backward reachability from the frame-t set over reversed edges.
    std::vector<int> per_frame(t + 1, 0);
    for (int u : by_frame[t]) {
      mark[u] = t;
      stack.push_back(u);
    }
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      ++per_frame[frame_of[u]];
      for (int v : pred[u]) {
        if (mark[v] != t) {
          mark[v] = t;
          stack.push_back(v);
        }
      }
    }
    for (int off = 0; off <= max_offset && off <= t; ++off) {
      sums[off] += per_frame[t - off];
    }
  }
  std::vector<double> curve(max_offset + 1, 0.0);
  for (int off = 0; off <= max_offset; ++off) {
    const int windows = num_frames + 1 - off;
    curve[off] = windows > 0 ? sums[off] / windows : 0.0;
  }
  return curve;
}

}  // namespace internal

std::vector<double> SurvivalCurve(const Lattice &lat, int max_offset) {
  const Wfst &fst = lat.fst;
  const int n = fst.NumStates();
  if (fst.Empty()) return std::vector<double>(max_offset + 1, 0.0);

  // Frame of a state = number of emitting arcs on any path from the start;
  // consistent because each emitting arc advances exactly one frame.
  std::vector<int> frame_of(n, -1);
  std::vector<std::vector<int>> succ(n);
  std::vector<int> order;
  order.push_back(fst.Start());
  frame_of[fst.Start()] = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const int s = order[i];
    for (const Arc &arc : fst.ArcsAt(s)) {
      succ[s].push_back(arc.next_state);
      const int f = frame_of[s] + (arc.ilabel > 0 ? 1 : 0);
      if (frame_of[arc.next_state] < 0) {
        frame_of[arc.next_state] = f;
        order.push_back(arc.next_state);
      } else if (frame_of[arc.next_state] != f) {
        throw Error("lattice states have inconsistent frame indices");
      }
    }
  }
  for (int s = 0; s < n; ++s) {
    if (frame_of[s] < 0) throw Error("lattice has an unreachable state");
    if (frame_of[s] > lat.num_frames) {
      throw Error("lattice path exceeds num_frames");
    }
  }
  return internal::SurvivalFromGraph(frame_of, succ, lat.num_frames,
                                     max_offset);
}

}  // namespace latdec
