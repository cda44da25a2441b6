// latdec/paths.cc

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

#include "latdec/paths.h"

#include <algorithm>
#include <cstddef>

#include "latdec/util.h"

namespace latdec {

namespace {

// Distance-to-final for every state under the DualCost order, by relaxation
// sweeps. Converges within NumStates sweeps unless a negative-total cycle
// keeps improving costs, which is reported as an error.
std::vector<DualCost> DistanceToFinal(const Wfst &fst) {
  const int n = fst.NumStates();
  std::vector<DualCost> dist(n, DualCost::Zero());
  for (const auto &[state, w] : fst.Finals()) dist[state] = w;
  for (int sweep = 0; sweep <= n + 1; ++sweep) {
    bool changed = false;
    for (int s = n - 1; s >= 0; --s) {
      for (const auto &arc : fst.ArcsAt(s)) {
        if (dist[arc.next_state].IsZero()) continue;
        const DualCost cand = Times(arc.weight, dist[arc.next_state]);
        if (cand < dist[s]) {
          dist[s] = cand;
          changed = true;
        }
      }
    }
    if (!changed) return dist;
  }
  throw Error("shortest path unbounded: negative-total cycle");
}

bool OrderEqual(const DualCost &a, const DualCost &b) {
  return !(a < b) && !(b < a);
}

}  // namespace

PathResult ShortestPath(const Wfst &fst) {
  if (fst.Empty()) throw NoPathError("no accepting path: empty machine");
  const auto dist = DistanceToFinal(fst);
  if (dist[fst.Start()].IsZero())
    throw NoPathError("no accepting path from start state");

  PathResult result;
  result.cost = dist[fst.Start()];
  int s = fst.Start();
  result.states.push_back(s);
  // At each state the fixpoint guarantees either the final weight or some
  // arc reproduces dist[s] exactly; stopping is preferred on ties so the
  // state sequence is lexicographically smallest.
  std::size_t steps = 0;
  const std::size_t max_steps =
      static_cast<std::size_t>(fst.NumStates()) * 4 + 100000;
  for (;;) {
    const DualCost here = dist[s];
    const DualCost fin = fst.Final(s);
    if (!fin.IsZero() && OrderEqual(fin, here)) break;
    const Arc *best = nullptr;
    DualCost best_cand = DualCost::Zero();
    for (const auto &arc : fst.ArcsAt(s)) {
      if (dist[arc.next_state].IsZero()) continue;
      const DualCost cand = Times(arc.weight, dist[arc.next_state]);
      if (!OrderEqual(cand, here)) continue;
      if (best == nullptr || arc.next_state < best->next_state) {
        best = &arc;
        best_cand = cand;
      }
    }
    (void)best_cand;
    if (best == nullptr)
      throw Error("shortest-path extraction lost the optimum");
    if (best->ilabel != 0) result.ilabels.push_back(best->ilabel);
    if (best->olabel != 0) result.olabels.push_back(best->olabel);
    s = best->next_state;
    result.states.push_back(s);
    if (++steps > max_steps)
      throw Error("shortest-path extraction cycled on a zero-cost loop");
  }
  return result;
}

std::vector<PathEntry> EnumeratePaths(const Wfst &fst,
                                      std::size_t max_paths) {
  std::vector<PathEntry> results;
  if (fst.Empty()) return results;
  const bool acyclic = IsAcyclic(fst);
  const std::size_t arc_cap =
      acyclic ? static_cast<std::size_t>(-1)
              : static_cast<std::size_t>(fst.NumStates()) * 10;
  // Cyclic machines additionally get a global traversal budget so a dense
  // cycle structure cannot explore exponentially many prefixes that never
  // reach the accepted-path budget.
  std::size_t step_budget =
      acyclic ? static_cast<std::size_t>(-1) : 1000 * (max_paths + 100);

  struct Frame {
    int state;
    std::size_t arc_idx;
    DualCost cost;  // accumulated cost entering this frame
  };
  std::vector<Frame> stack;
  std::vector<int> ilabels, olabels;

  stack.push_back({fst.Start(), 0, DualCost::One()});
  auto maybe_accept = [&]() {
    const DualCost fin = fst.Final(stack.back().state);
    if (fin.IsZero()) return true;
    if (results.size() == max_paths) {
      if (acyclic)
        throw CapacityError(
            StrCat("path enumeration exceeded max_paths = ", max_paths));
      return false;
    }
    results.push_back({Times(stack.back().cost, fin), ilabels, olabels});
    return true;
  };
  if (!maybe_accept()) return results;
  while (!stack.empty()) {
    Frame &top = stack.back();
    const auto &arcs = fst.ArcsAt(top.state);
    if (top.arc_idx == arcs.size() || stack.size() - 1 > arc_cap) {
      stack.pop_back();
      if (!stack.empty()) {
        const Arc &arc =
            fst.ArcsAt(stack.back().state)[stack.back().arc_idx - 1];
        if (arc.ilabel != 0) ilabels.pop_back();
        if (arc.olabel != 0) olabels.pop_back();
      }
      continue;
    }
    const Arc &arc = arcs[top.arc_idx++];
    if (arc.ilabel != 0) ilabels.push_back(arc.ilabel);
    if (arc.olabel != 0) olabels.push_back(arc.olabel);
    stack.push_back({arc.next_state, 0, Times(top.cost, arc.weight)});
    if (!maybe_accept() || --step_budget == 0) {
      // Bounded (cyclic) mode hit its path or traversal budget.
      break;
    }
  }
  std::sort(results.begin(), results.end(),
            [](const PathEntry &x, const PathEntry &y) {
              if (x.cost < y.cost) return true;
              if (y.cost < x.cost) return false;
              if (x.olabels != y.olabels) return x.olabels < y.olabels;
              return x.ilabels < y.ilabels;
            });
  return results;
}

}  // namespace latdec
