// latdec/decoder-common.h

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

#ifndef LATDEC_DECODER_COMMON_H_
#define LATDEC_DECODER_COMMON_H_

#include <cstdint>
#include <string>
#include <vector>

#include "latdec/util.h"

namespace latdec {

struct DecodeOptions {
  double beam = 15.0;
  int max_active = 7000;
  double lattice_beam = 8.0;
  double acoustic_scale = 1.0;
  int prune_interval = 25;  // frames between periodic lattice prunes

  // Throws Error unless beam > lattice_beam > 0, max_active >= 1,
  // prune_interval >= 1 and acoustic_scale is finite and non-negative.
  // Disabling pruning means a huge finite lattice_beam under an infinite
  // beam; two infinities would make the first inequality false.
  void Check() const;
};

struct AsyncOptions : DecodeOptions {
  int offset = 5;       // frames the backfill front trails the exploration
  int front_batch = 1;  // frames processed per front turn
  // A* gate slack; negative means "follow lattice_beam".
  double backfill_beam = -1.0;

  double GateBeam() const {
    return backfill_beam < 0 ? lattice_beam : backfill_beam;
  }

  // Base checks plus offset >= 1, front_batch >= 1, GateBeam() > 0.
  void Check() const;
};

struct DecodeStats {
  // Arc expansions that created a token or improved one's cost. The second
  // counter covers the backfill front and its consistency cascades; the
  // first covers everything else.
  std::int64_t propagations = 0;
  std::int64_t propagations_backfill = 0;
  // Token count per frame index 0..T, recorded when the frame's epsilon
  // closure first completes (backfill may add tokens later).
  std::vector<int> tokens_per_frame;
  double wall_seconds = 0.0;
  double rtf = 0.0;  // wall_seconds / audio seconds
};

// Decoding could not complete (no token survived, or none reached a final
// state). Carries whatever statistics had accumulated.
class DecodeError : public Error {
 public:
  DecodeError(const std::string &what, DecodeStats stats)
      : Error(what), stats_(std::move(stats)) {}
  const DecodeStats &Stats() const { return stats_; }

 private:
  DecodeStats stats_;
};

}  // namespace latdec

#endif  // LATDEC_DECODER_COMMON_H_
