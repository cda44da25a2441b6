// latdec/residual.cc

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

#include "latdec/residual.h"

#include "latdec/util.h"

namespace latdec {

namespace {

void CheckCoverage(const BackoffLm &have, const BackoffLm &need,
                   const char *direction) {
  if (need.UnkId() >= 0) return;
  for (const int w : have.RegularWords()) {
    if (w == have.UnkId()) continue;  // a fallback device, not vocabulary
    if (!need.HasWord(w))
      throw Error(StrCat("residual pair vocabulary mismatch: \"",
                         have.Vocab()->Find(w), "\" is only in the ",
                         direction, " model and the other has no <unk>"));
  }
}

}  // namespace

ResidualGrammar::ResidualGrammar(std::shared_ptr<const BackoffLm> small,
                                 std::shared_ptr<const BackoffLm> large)
    : small_(std::move(small)), large_(std::move(large)) {
  if (!small_ || !large_) throw Error("residual pair needs two models");
  if (small_->Vocab() != large_->Vocab())
    throw Error("residual pair must share one word symbol table");
  CheckCoverage(*small_, *large_, "small");
  CheckCoverage(*large_, *small_, "large");
}

}  // namespace latdec
