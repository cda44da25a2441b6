// latdec/residual.h

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

#ifndef LATDEC_RESIDUAL_H_
#define LATDEC_RESIDUAL_H_

#include <cstdint>
#include <memory>
#include <utility>

#include "latdec/arpa-lm.h"

namespace latdec {

// Paired state of the difference machine: both histories advance in
// lockstep on every consumed word.
struct FState {
  LmState small;
  LmState large;
  bool operator==(const FState &o) const {
    return small == o.small && large == o.large;
  }
  bool operator!=(const FState &o) const { return !(*this == o); }
};

struct FStateHash {
  std::size_t operator()(const FState &s) const {
    return static_cast<std::size_t>(
        (static_cast<std::uint64_t>(s.small.ctx) << 32) ^
        static_cast<std::uint64_t>(static_cast<std::uint32_t>(s.large.ctx)) *
            0x9e3779b97f4a7c15ull);
  }
};

// On-demand difference grammar between a small model G baked into a
// decoding graph and a large model G': each step costs
// cost_{G'}(w | large history) - cost_G(w | small history). Never
// materialized as a static machine; queries are deterministic, so there is
// no backoff-arc ambiguity to resolve.
class ResidualGrammar {
 public:
  // Both models must share one symbol table, and every word one side knows
  // must be scoreable by the other (directly or through <unk>); anything
  // else is an error here rather than at query time.
  ResidualGrammar(std::shared_ptr<const BackoffLm> small,
                  std::shared_ptr<const BackoffLm> large);

  FState Start() const {
    return FState{small_->Start(), large_->Start()};
  }

  // Advances both histories, returning the cost difference. May be
  // negative: the large model can like a word more than the small one.
  std::pair<FState, double> Step(FState s, int word) const {
    auto [ns, cs] = small_->Step(s.small, word);
    auto [nl, cl] = large_->Step(s.large, word);
    return {FState{ns, nl}, cl - cs};
  }

  // End-of-sentence cost difference.
  double FinalCost(FState s) const {
    return large_->FinalCost(s.large) - small_->FinalCost(s.small);
  }

  const BackoffLm &Small() const { return *small_; }
  const BackoffLm &Large() const { return *large_; }

 private:
  std::shared_ptr<const BackoffLm> small_;
  std::shared_ptr<const BackoffLm> large_;
};

}  // namespace latdec

#endif  // LATDEC_RESIDUAL_H_
