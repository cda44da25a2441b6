// latdec/compose.cc

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

#include "latdec/compose.h"

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "latdec/util.h"

namespace latdec {

namespace {

// Composition state: a state pair plus one filter bit. filter=1 after an
// input-epsilon move of b; left-alone moves are then forbidden until the
// next match, which canonicalizes every block of single-sided epsilon moves
// as "all a-moves, then all b-moves" and keeps path multiplicities equal to
// the brute-force pairing of operand paths.
struct Triple {
  int s1;
  int s2;
  int filter;
  bool operator==(const Triple &o) const {
    return s1 == o.s1 && s2 == o.s2 && filter == o.filter;
  }
};

struct TripleHash {
  std::size_t operator()(const Triple &t) const {
    std::uint64_t h = static_cast<std::uint64_t>(t.s1) * 0x9e3779b97f4a7c15ull;
    h ^= static_cast<std::uint64_t>(t.s2) + 0x9e3779b97f4a7c15ull +
         (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h * 2 + t.filter);
  }
};

// First arc of `arcs` with the given ilabel (arcs are ilabel-sorted).
std::size_t LowerBoundILabel(const std::vector<Arc> &arcs, int ilabel) {
  std::size_t lo = 0, hi = arcs.size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (arcs[mid].ilabel < ilabel)
      lo = mid + 1;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace

Wfst Compose(const Wfst &a, const Wfst &b) {
  Wfst out;
  out.isymbols = a.isymbols;
  out.osymbols = b.osymbols;
  if (a.Empty() || b.Empty()) return out;

  std::unordered_map<Triple, int, TripleHash> ids;
  std::vector<Triple> order;
  auto state_of = [&](const Triple &t) {
    auto [it, inserted] = ids.emplace(t, static_cast<int>(order.size()));
    if (inserted) {
      order.push_back(t);
      out.AddState();
    }
    return it->second;
  };

  const Triple start{a.Start(), b.Start(), 0};
  out.SetStart(state_of(start));

  for (std::size_t qi = 0; qi < order.size(); ++qi) {
    const Triple t = order[qi];
    const int q = static_cast<int>(qi);
    const auto &arcs1 = a.ArcsAt(t.s1);
    const auto &arcs2 = b.ArcsAt(t.s2);
    for (const auto &a1 : arcs1) {
      if (a1.olabel == 0) {
        if (t.filter == 0) {
          // a moves alone on an output-epsilon arc.
          out.AddArc(q, Arc(a1.ilabel, 0, a1.weight,
                            state_of({a1.next_state, t.s2, 0})));
        }
        continue;
      }
      // Matched move.
      for (std::size_t i = LowerBoundILabel(arcs2, a1.olabel);
           i < arcs2.size() && arcs2[i].ilabel == a1.olabel; ++i) {
        const auto &a2 = arcs2[i];
        out.AddArc(q, Arc(a1.ilabel, a2.olabel, Times(a1.weight, a2.weight),
                          state_of({a1.next_state, a2.next_state, 0})));
      }
    }
    // b moves alone on its input-epsilon arcs.
    for (std::size_t i = LowerBoundILabel(arcs2, 0);
         i < arcs2.size() && arcs2[i].ilabel == 0; ++i) {
      const auto &a2 = arcs2[i];
      out.AddArc(q, Arc(0, a2.olabel, a2.weight,
                        state_of({t.s1, a2.next_state, 1})));
    }
    const DualCost f1 = a.Final(t.s1), f2 = b.Final(t.s2);
    if (!f1.IsZero() && !f2.IsZero()) out.SetFinal(q, Times(f1, f2));
  }

  Connect(&out);
  out.SortArcs();
  return out;
}

}  // namespace latdec
