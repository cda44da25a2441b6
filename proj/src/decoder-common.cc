// latdec/decoder-common.cc

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

#include "latdec/decoder-common.h"

#include <cmath>

namespace latdec {

void DecodeOptions::Check() const {
  if (!(lattice_beam > 0.0)) {
    throw Error(StrCat("lattice_beam must be positive, got ", lattice_beam));
  }
  if (!(beam > lattice_beam)) {
    throw Error(StrCat("beam (", beam, ") must exceed lattice_beam (",
                       lattice_beam, ")"));
  }
  if (max_active < 1) {
    throw Error(StrCat("max_active must be at least 1, got ", max_active));
  }
  if (prune_interval < 1) {
    throw Error(
        StrCat("prune_interval must be at least 1, got ", prune_interval));
  }
  if (!std::isfinite(acoustic_scale) || acoustic_scale < 0.0) {
    throw Error(
        StrCat("acoustic_scale must be finite and non-negative, got ",
               acoustic_scale));
  }
}

void AsyncOptions::Check() const {
  DecodeOptions::Check();
  if (offset < 1) {
    throw Error(StrCat("offset must be at least 1, got ", offset));
  }
  if (front_batch < 1) {
    throw Error(StrCat("front_batch must be at least 1, got ", front_batch));
  }
  if (!(GateBeam() > 0.0)) {
    throw Error(StrCat("backfill_beam must be positive, got ", GateBeam()));
  }
}

}  // namespace latdec
