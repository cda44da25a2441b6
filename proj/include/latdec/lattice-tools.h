// latdec/lattice-tools.h

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

// Lattice post-processing and evaluation: residual rescoring, average
// log-likelihood, and word error rate. All operations are pure.

#ifndef LATDEC_LATTICE_TOOLS_H_
#define LATDEC_LATTICE_TOOLS_H_

#include <vector>

#include "latdec/lattice.h"
#include "latdec/residual.h"

namespace latdec {

// On-demand composition of the lattice with the difference grammar over
// output labels: states become (lattice state, F state) pairs, every
// word-bearing arc gains the residual step cost in its graph component,
// and finals gain the residual final cost. The result is trimmed. Word
// coverage follows the residual's <unk> policy.
Lattice RescoreLattice(const Lattice &lat, const ResidualGrammar &f);

// -(best path total cost) / num_frames. Requires num_frames >= 1; throws
// NoPathError on an empty lattice.
double AvgLogLike(const Lattice &lat, int num_frames);

struct WerResult {
  int substitutions = 0;
  int deletions = 0;
  int insertions = 0;
  double percent = 0.0;
  // Empty reference against a non-empty hypothesis: percent is 100 per
  // hypothesis word by convention and the rate is not meaningful.
  bool degenerate = false;

  int Edits() const { return substitutions + deletions + insertions; }
};

// Unit-cost Levenshtein alignment; percent = 100 * edits / len(ref). Ties
// prefer matches, then substitutions, then deletions, then insertions, so
// an insert+delete pair never displaces a substitution.
WerResult ComputeWer(const std::vector<int> &ref, const std::vector<int> &hyp);

}  // namespace latdec

#endif  // LATDEC_LATTICE_TOOLS_H_
