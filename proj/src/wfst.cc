// latdec/wfst.cc

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

#include "latdec/wfst.h"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <tuple>

#include "latdec/util.h"

namespace latdec {

namespace {
// Guards against absurd ids in text input allocating the address space.
constexpr long kMaxStateId = 10'000'000;
}  // namespace

int Wfst::AddState() {
  arcs_.emplace_back();
  return static_cast<int>(arcs_.size()) - 1;
}

void Wfst::ReserveStates(int n) { arcs_.reserve(n); }

void Wfst::EnsureState(int state) {
  if (state < 0) throw Error("negative state id");
  if (state >= static_cast<int>(arcs_.size())) arcs_.resize(state + 1);
}

void Wfst::AddArc(int state, const Arc &arc) {
  EnsureState(state);
  EnsureState(arc.next_state);
  arcs_[state].push_back(arc);
}

void Wfst::SetStart(int state) {
  EnsureState(state);
  start_ = state;
}

void Wfst::SetFinal(int state, DualCost weight) {
  EnsureState(state);
  if (weight.IsZero()) {
    finals_.erase(state);
  } else {
    finals_[state] = weight;
  }
}

std::size_t Wfst::NumArcs() const {
  std::size_t n = 0;
  for (const auto &a : arcs_) n += a.size();
  return n;
}

DualCost Wfst::Final(int state) const {
  auto it = finals_.find(state);
  return it == finals_.end() ? DualCost::Zero() : it->second;
}

bool Wfst::IsFinal(int state) const { return finals_.count(state) > 0; }

void Wfst::SortArcs() {
  for (auto &arcs : arcs_) {
    std::sort(arcs.begin(), arcs.end(), [](const Arc &x, const Arc &y) {
      return std::make_tuple(x.ilabel, x.olabel, x.next_state, x.weight.graph,
                             x.weight.acoustic) <
             std::make_tuple(y.ilabel, y.olabel, y.next_state, y.weight.graph,
                             y.weight.acoustic);
    });
  }
}

int Wfst::MaxILabel() const {
  int best = 0;
  for (const auto &arcs : arcs_)
    for (const auto &arc : arcs) best = std::max(best, arc.ilabel);
  return best;
}

std::optional<std::vector<int>> Wfst::EpsilonTopoOrder() const {
  const int n = NumStates();
  // Kahn's algorithm over the eps-input subgraph; non-participating states
  // fall out in id order.
  std::vector<int> indegree(n, 0);
  for (int s = 0; s < n; ++s)
    for (const auto &arc : arcs_[s])
      if (arc.ilabel == 0) ++indegree[arc.next_state];
  std::vector<int> order(n, -1);
  std::vector<int> ready;
  ready.reserve(n);
  for (int s = 0; s < n; ++s)
    if (indegree[s] == 0) ready.push_back(s);
  int pos = 0;
  for (std::size_t i = 0; i < ready.size(); ++i) {
    const int s = ready[i];
    order[s] = pos++;
    for (const auto &arc : arcs_[s]) {
      if (arc.ilabel != 0) continue;
      if (--indegree[arc.next_state] == 0) ready.push_back(arc.next_state);
    }
  }
  if (pos != n) return std::nullopt;  // eps-input cycle
  return order;
}

void Wfst::Validate() const {
  const int n = NumStates();
  if (n == 0) {
    if (start_ >= 0) throw Error("start state set on empty machine");
    return;
  }
  if (start_ < 0 || start_ >= n)
    throw Error(StrCat("start state ", start_, " out of range"));
  for (int s = 0; s < n; ++s) {
    for (const auto &arc : arcs_[s]) {
      if (arc.next_state < 0 || arc.next_state >= n)
        throw Error(StrCat("arc from ", s, " to out-of-range state ",
                           arc.next_state));
      if (arc.ilabel < 0 || arc.olabel < 0)
        throw Error(StrCat("negative label on arc from ", s));
    }
  }
  for (const auto &[state, w] : finals_) {
    (void)w;
    if (state < 0 || state >= n)
      throw Error(StrCat("final state ", state, " out of range"));
  }
  if (!EpsilonTopoOrder()) throw Error("input-epsilon cycle");
}

namespace {

DualCost ParseWeight(const std::string &field) {
  const auto parts = SplitChar(field, ',');
  if (parts.size() == 1)
    return DualCost(ParseDouble(parts[0], "weight"), 0.0);
  if (parts.size() == 2)
    return DualCost(ParseDouble(parts[0], "graph cost"),
                    ParseDouble(parts[1], "acoustic cost"));
  throw ParseError(StrCat("bad weight \"", field, "\""));
}

int ParseStateId(const std::string &field) {
  const long id = ParseInt(field, "state id");
  if (id < 0 || id > kMaxStateId)
    throw ParseError(StrCat("state id out of range: ", id));
  return static_cast<int>(id);
}

int ParseLabel(const std::string &field) {
  const long v = ParseInt(field, "label");
  if (v < 0 || v > kMaxStateId)
    throw ParseError(StrCat("label out of range: ", v));
  return static_cast<int>(v);
}

void FormatCost(double v, std::string *out) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out->append(buf);
}

}  // namespace

Wfst ReadTextFst(std::istream &in, bool acceptor) {
  Wfst fst;
  std::string line;
  int lineno = 0;
  bool saw_line = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto trimmed = TrimWhitespace(line);
    if (trimmed.empty()) continue;
    const auto fields = SplitWhitespace(trimmed);
    try {
      const std::size_t arc_fields = acceptor ? 3 : 4;
      if (fields.size() == 1 || fields.size() == 2) {
        // Final-state line.
        const int state = ParseStateId(fields[0]);
        fst.EnsureState(state);
        fst.SetFinal(state,
                     fields.size() == 2 ? ParseWeight(fields[1])
                                        : DualCost::One());
        if (!saw_line) fst.SetStart(state);
      } else if (fields.size() == arc_fields ||
                 fields.size() == arc_fields + 1) {
        const int src = ParseStateId(fields[0]);
        const int dst = ParseStateId(fields[1]);
        const int ilabel = ParseLabel(fields[2]);
        const int olabel = acceptor ? ilabel : ParseLabel(fields[3]);
        const DualCost w = fields.size() == arc_fields + 1
                               ? ParseWeight(fields[arc_fields])
                               : DualCost::One();
        fst.AddArc(src, Arc(ilabel, olabel, w, dst));
        if (!saw_line) fst.SetStart(src);
      } else {
        throw ParseError(StrCat("unexpected field count ", fields.size()));
      }
    } catch (const ParseError &e) {
      throw ParseError(StrCat("fst text line ", lineno, ": ", e.what()));
    }
    saw_line = true;
  }
  fst.SortArcs();
  fst.Validate();
  return fst;
}

Wfst ReadTextFstFile(const std::string &path, bool acceptor) {
  std::ifstream in(path);
  if (!in) throw Error(StrCat("cannot open fst: ", path));
  return ReadTextFst(in, acceptor);
}

namespace {
void WriteFinalLine(int state, DualCost w, std::string *buf,
                    std::ostream &out) {
  buf->clear();
  *buf += std::to_string(state);
  if (!(w == DualCost::One())) {
    *buf += ' ';
    FormatCost(w.graph, buf);
    if (w.acoustic != 0.0) {
      *buf += ',';
      FormatCost(w.acoustic, buf);
    }
  }
  *buf += '\n';
  out << *buf;
}
}  // namespace

void WriteTextFst(const Wfst &fst, std::ostream &out, bool acceptor) {
  std::string buf;
  // The start state's first line must come first so a reader recovers it.
  // An arcless start state gets a final line up front; when it is not final
  // the written weight is inf, which reads back as a non-final state.
  bool start_final_first = false;
  if (fst.Start() >= 0 && fst.ArcsAt(fst.Start()).empty()) {
    WriteFinalLine(fst.Start(), fst.Final(fst.Start()), &buf, out);
    start_final_first = fst.IsFinal(fst.Start());
  }
  for (int s = 0; s < fst.NumStates(); ++s) {
    const int state = s == 0 ? fst.Start() : (s == fst.Start() ? 0 : s);
    if (state < 0) break;
    for (const auto &arc : fst.ArcsAt(state)) {
      buf.clear();
      buf += std::to_string(state);
      buf += ' ';
      buf += std::to_string(arc.next_state);
      buf += ' ';
      buf += std::to_string(arc.ilabel);
      if (!acceptor) {
        buf += ' ';
        buf += std::to_string(arc.olabel);
      }
      if (!(arc.weight == DualCost::One())) {
        buf += ' ';
        FormatCost(arc.weight.graph, &buf);
        if (arc.weight.acoustic != 0.0) {
          buf += ',';
          FormatCost(arc.weight.acoustic, &buf);
        }
      }
      buf += '\n';
      out << buf;
    }
  }
  for (const auto &[state, w] : fst.Finals()) {
    if (start_final_first && state == fst.Start()) continue;
    WriteFinalLine(state, w, &buf, out);
  }
}

void WriteTextFstFile(const Wfst &fst, const std::string &path,
                      bool acceptor) {
  std::ofstream out(path);
  if (!out) throw Error(StrCat("cannot write fst: ", path));
  WriteTextFst(fst, out, acceptor);
}

void Connect(Wfst *fst) {
  if (fst->Empty()) {
    Wfst empty;
    empty.isymbols = fst->isymbols;
    empty.osymbols = fst->osymbols;
    *fst = std::move(empty);
    return;
  }
  const int n = fst->NumStates();
  std::vector<char> reach(n, 0);
  std::vector<int> stack = {fst->Start()};
  reach[fst->Start()] = 1;
  while (!stack.empty()) {
    const int s = stack.back();
    stack.pop_back();
    for (const auto &arc : fst->ArcsAt(s)) {
      if (!reach[arc.next_state]) {
        reach[arc.next_state] = 1;
        stack.push_back(arc.next_state);
      }
    }
  }
  // Co-reachability over reversed arcs.
  std::vector<std::vector<int>> preds(n);
  for (int s = 0; s < n; ++s)
    for (const auto &arc : fst->ArcsAt(s)) preds[arc.next_state].push_back(s);
  std::vector<char> coreach(n, 0);
  for (const auto &[state, w] : fst->Finals()) {
    (void)w;
    if (!coreach[state]) {
      coreach[state] = 1;
      stack.push_back(state);
    }
  }
  while (!stack.empty()) {
    const int s = stack.back();
    stack.pop_back();
    for (int p : preds[s]) {
      if (!coreach[p]) {
        coreach[p] = 1;
        stack.push_back(p);
      }
    }
  }
  std::vector<int> remap(n, -1);
  int kept = 0;
  for (int s = 0; s < n; ++s)
    if (reach[s] && coreach[s]) remap[s] = kept++;
  Wfst out;
  out.isymbols = fst->isymbols;
  out.osymbols = fst->osymbols;
  if (remap[fst->Start()] < 0) {
    *fst = std::move(out);
    return;
  }
  out.ReserveStates(kept);
  for (int s = 0; s < kept; ++s) out.AddState();
  out.SetStart(remap[fst->Start()]);
  for (int s = 0; s < n; ++s) {
    if (remap[s] < 0) continue;
    for (const auto &arc : fst->ArcsAt(s)) {
      if (remap[arc.next_state] < 0) continue;
      out.AddArc(remap[s],
                 Arc(arc.ilabel, arc.olabel, arc.weight, remap[arc.next_state]));
    }
  }
  for (const auto &[state, w] : fst->Finals())
    if (remap[state] >= 0) out.SetFinal(remap[state], w);
  *fst = std::move(out);
}

bool IsAcyclic(const Wfst &fst) {
  const int n = fst.NumStates();
  // 0 = unvisited, 1 = on stack, 2 = done.
  std::vector<char> color(n, 0);
  std::vector<std::pair<int, std::size_t>> stack;
  for (int root = 0; root < n; ++root) {
    if (color[root]) continue;
    stack.emplace_back(root, 0);
    color[root] = 1;
    while (!stack.empty()) {
      auto &[s, idx] = stack.back();
      if (idx == fst.ArcsAt(s).size()) {
        color[s] = 2;
        stack.pop_back();
        continue;
      }
      const int next = fst.ArcsAt(s)[idx++].next_state;
      if (color[next] == 1) return false;
      if (color[next] == 0) {
        color[next] = 1;
        stack.emplace_back(next, 0);
      }
    }
  }
  return true;
}

}  // namespace latdec
