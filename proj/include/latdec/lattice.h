// latdec/lattice.h

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

#ifndef LATDEC_LATTICE_H_
#define LATDEC_LATTICE_H_

#include <vector>

#include "latdec/dual-cost.h"
#include "latdec/wfst.h"

namespace latdec {

// State-level lattice: an acyclic Wfst whose states are surviving decoder
// tokens. Every arc keeps the split (graph, acoustic) cost it had during
// decoding; final weights fold the graph final costs of the last frame.
// num_frames is the utterance length; each path carries exactly that many
// emitting arcs.
struct Lattice {
  Wfst fst;
  int num_frames = 0;
};

struct BestPath {
  DualCost cost;             // includes the final weight
  std::vector<int> words;    // olabels, epsilons dropped
  std::vector<int> ilabels;  // emitting labels, one per frame
};

// Deterministic minimum-total path. Throws NoPathError on an empty lattice.
BestPath LatticeBestPath(const Lattice &lat);

// Mean number of frame (t - offset) states still connected to frame-t
// states, averaged over every t with t >= offset; entry [0] is the mean
// state count per frame. Run on a decoder's raw store the curve shows how
// pruning-with-hindsight thins the past; on a trimmed lattice every state
// is connected everywhere, so it degenerates to running frame counts.
std::vector<double> SurvivalCurve(const Lattice &lat, int max_offset);

namespace internal {
// Shared by the lattice and raw-token-store survival curves: frame index
// per node plus forward adjacency (within-frame or frame+1 edges only).
std::vector<double> SurvivalFromGraph(
    const std::vector<int> &frame_of,
    const std::vector<std::vector<int>> &succ, int num_frames,
    int max_offset);
}  // namespace internal

}  // namespace latdec

#endif  // LATDEC_LATTICE_H_
