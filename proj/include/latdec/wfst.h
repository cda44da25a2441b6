// latdec/wfst.h

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

#ifndef LATDEC_WFST_H_
#define LATDEC_WFST_H_

#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "latdec/dual-cost.h"
#include "latdec/symbol-table.h"

namespace latdec {

// Label 0 is epsilon on either tape. Emitting arcs (ilabel > 0) consume one
// acoustic frame during decoding; input-epsilon arcs consume none, which is
// why input-epsilon cycles are rejected at load time.
struct Arc {
  int ilabel = 0;
  int olabel = 0;
  DualCost weight;
  int next_state = -1;

  Arc() = default;
  Arc(int i, int o, DualCost w, int ns)
      : ilabel(i), olabel(o), weight(w), next_state(ns) {}
};

// Mutable vector-backed WFST. Decoders and algorithms take it by const
// reference and rely on arcs being sorted by input label (builders and
// readers call SortArcs()). States are dense ints; start() is -1 for the
// empty machine.
class Wfst {
 public:
  int AddState();
  void ReserveStates(int n);
  // Grows the state vector so `state` is valid.
  void EnsureState(int state);
  void AddArc(int state, const Arc &arc);
  void SetStart(int state);
  void SetFinal(int state, DualCost weight);

  int Start() const { return start_; }
  int NumStates() const { return static_cast<int>(arcs_.size()); }
  std::size_t NumArcs() const;
  bool Empty() const { return start_ < 0 || arcs_.empty(); }

  const std::vector<Arc> &ArcsAt(int state) const { return arcs_[state]; }
  std::vector<Arc> *MutableArcsAt(int state) { return &arcs_[state]; }

  // Zero() when not final.
  DualCost Final(int state) const;
  bool IsFinal(int state) const;
  const std::map<int, DualCost> &Finals() const { return finals_; }

  // Sorts every state's arcs by (ilabel, olabel, next_state, weight); the
  // composition and decoders require ilabel order.
  void SortArcs();

  // Largest ilabel over all arcs; 0 when there are no emitting arcs.
  int MaxILabel() const;

  // Topological position of every state in the input-epsilon subgraph, or
  // nullopt when that subgraph has a cycle. Positions form a permutation of
  // [0, NumStates()): every eps-input arc goes from a smaller to a larger
  // position.
  std::optional<std::vector<int>> EpsilonTopoOrder() const;

  // Structural checks: a start state when nonempty, arc targets in range,
  // no input-epsilon cycles. Throws Error.
  void Validate() const;

  std::shared_ptr<const SymbolTable> isymbols;
  std::shared_ptr<const SymbolTable> osymbols;

 private:
  int start_ = -1;
  std::vector<std::vector<Arc>> arcs_;
  std::map<int, DualCost> finals_;
};

// AT&T/OpenFST-style text format with a dual-weight extension:
//   src dst ilabel olabel [weight]     (arc; acceptor=true drops olabel)
//   state [weight]                     (final state)
// where weight is either "g" or "g,a". The source state of the first line is
// the start state; missing weights mean One(). States are created densely up
// to the largest id mentioned. Throws ParseError on malformed input,
// out-of-range ids, or input-epsilon cycles.
Wfst ReadTextFst(std::istream &in, bool acceptor = false);
Wfst ReadTextFstFile(const std::string &path, bool acceptor = false);
void WriteTextFst(const Wfst &fst, std::ostream &out, bool acceptor = false);
void WriteTextFstFile(const Wfst &fst, const std::string &path,
                      bool acceptor = false);

// Removes states that are not both reachable from the start and co-reachable
// to a final state. Preserves relative state order; the result of trimming
// everything is the empty machine.
void Connect(Wfst *fst);

bool IsAcyclic(const Wfst &fst);

}  // namespace latdec

#endif  // LATDEC_WFST_H_
