// latdec/paths.h

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

#ifndef LATDEC_PATHS_H_
#define LATDEC_PATHS_H_

#include <cstddef>
#include <vector>

#include "latdec/util.h"
#include "latdec/wfst.h"

namespace latdec {

class NoPathError : public Error {
 public:
  using Error::Error;
};

// enumerate_paths exceeded max_paths on an acyclic machine.
class CapacityError : public Error {
 public:
  using Error::Error;
};

struct PathResult {
  DualCost cost;
  std::vector<int> ilabels;  // epsilons omitted
  std::vector<int> olabels;  // epsilons omitted
  std::vector<int> states;   // full visited sequence incl. start
};

// Single cheapest accepting path under the DualCost order. Ties prefer the
// smaller next state, then the earlier arc, which yields the
// lexicographically smallest state sequence among minimal paths.
// Throws NoPathError when no accepting path exists and Error when a
// negative-total cycle makes the minimum unbounded.
PathResult ShortestPath(const Wfst &fst);

struct PathEntry {
  DualCost cost;
  std::vector<int> ilabels;
  std::vector<int> olabels;
};

// All accepting paths, sorted ascending by (cost, olabels, ilabels). For an
// acyclic machine the enumeration is exhaustive and exceeding max_paths is a
// CapacityError. A cyclic machine is bounded instead: collection stops after
// max_paths accepted paths or a fixed traversal budget, and paths longer
// than 10*NumStates() arcs are abandoned. The bounded result is a sample
// that depends on state numbering; exact comparisons should only use it on
// acyclic machines.
std::vector<PathEntry> EnumeratePaths(const Wfst &fst, std::size_t max_paths);

}  // namespace latdec

#endif  // LATDEC_PATHS_H_
