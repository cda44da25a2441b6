// latdec/dual-cost.h

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

#ifndef LATDEC_DUAL_COST_H_
#define LATDEC_DUAL_COST_H_

#include <limits>

namespace latdec {

// Weight of the decoding semiring: negated-log graph and acoustic costs kept
// as separate components so lattices can be rescored or rescaled later.
// Plus selects the smaller weight under the (total, graph) order; Times adds
// componentwise. Zero is (+inf, +inf), One is (0, 0). Both components are
// 64-bit floats; costs may legitimately be negative (residual grammar costs
// are differences of log probabilities).
struct DualCost {
  double graph = 0.0;
  double acoustic = 0.0;

  constexpr DualCost() = default;
  constexpr DualCost(double g, double a) : graph(g), acoustic(a) {}

  double Total() const { return graph + acoustic; }

  static constexpr DualCost Zero() {
    return DualCost(std::numeric_limits<double>::infinity(),
                    std::numeric_limits<double>::infinity());
  }
  static constexpr DualCost One() { return DualCost(0.0, 0.0); }

  bool IsZero() const {
    return graph == std::numeric_limits<double>::infinity() &&
           acoustic == std::numeric_limits<double>::infinity();
  }
};

// Total order used everywhere ties must break the same way: total cost
// first, graph cost second. Two weights equal under this order have equal
// components (acoustic = total - graph).
inline bool operator<(const DualCost &a, const DualCost &b) {
  const double ta = a.Total(), tb = b.Total();
  if (ta != tb) return ta < tb;
  return a.graph < b.graph;
}

inline bool operator==(const DualCost &a, const DualCost &b) {
  return a.graph == b.graph && a.acoustic == b.acoustic;
}
inline bool operator!=(const DualCost &a, const DualCost &b) {
  return !(a == b);
}

inline DualCost Plus(const DualCost &a, const DualCost &b) {
  return b < a ? b : a;
}

inline DualCost Times(const DualCost &a, const DualCost &b) {
  return DualCost(a.graph + b.graph, a.acoustic + b.acoustic);
}

}  // namespace latdec

#endif  // LATDEC_DUAL_COST_H_
