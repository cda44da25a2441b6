// latdec/decoder-core.cc

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

#include "latdec/decoder-core.h"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <limits>

#include "latdec/util.h"

namespace latdec {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

void BigLmGraph::Validate() const {
  if (hclg == nullptr || f == nullptr) {
    throw Error("BigLmGraph needs both an HCLG graph and a residual grammar");
  }
  for (int s = 0; s < hclg->NumStates(); ++s) {
    for (const Arc &arc : hclg->ArcsAt(s)) {
      if (arc.olabel == 0) continue;
      const bool ok_small =
          f->Small().HasWord(arc.olabel) || f->Small().UnkId() >= 0;
      const bool ok_large =
          f->Large().HasWord(arc.olabel) || f->Large().UnkId() >= 0;
      if (!ok_small || !ok_large) {
        throw Error(StrCat("HCLG output label ", arc.olabel,
                           " is not scoreable by the residual grammar"));
      }
    }
  }
}

TokenStore::TokenStore(const Wfst &hclg, const ResidualGrammar *residual,
                       const DecodeOptions &opts)
    : hclg_(&hclg), residual_(residual), opts_(opts) {
  opts_.Check();
  hclg.Validate();
  auto topo = hclg.EpsilonTopoOrder();
  if (!topo) throw Error("decoding graph has an input-epsilon cycle");
  topo_pos_ = std::move(*topo);
}

void TokenStore::Reset(const LogLikelihoods *ll) {
  ll_ = ll;
  arena_.clear();
  frames_.clear();
  maps_.clear();
  stats_ = DecodeStats();
  acoustic_queries_ = 0;
  in_replay_ = false;
}

void TokenStore::EnsureFrame(int frame) {
  while (static_cast<int>(frames_.size()) <= frame) {
    frames_.emplace_back();
    maps_.emplace_back();
  }
}

int TokenStore::FindOrAdd(int frame, int state, const FState &f,
                          DualCost tot, bool *created, bool *improved) {
  *created = false;
  *improved = false;
  auto &map = maps_[frame];
  const Key key{state, f};
  auto it = map.find(key);
  if (it == map.end()) {
    const int id = static_cast<int>(arena_.size());
    Token tok;
    tok.hclg_state = state;
    tok.f_state = f;
    tok.frame = frame;
    tok.tot_cost = tot;
    arena_.push_back(std::move(tok));
    frames_[frame].push_back(id);
    map.emplace(key, id);
    *created = true;
    return id;
  }
  Token &tok = arena_[it->second];
  if (tot < tok.tot_cost) {
    tok.tot_cost = tot;
    *improved = true;
  }
  return it->second;
}

void TokenStore::AddLink(int src, int dest, int ilabel, int olabel,
                         double graph_cost, double acoustic_cost,
                         double hclg_graph_cost) {
  arena_[src].links.push_back(
      ForwardLink{dest, ilabel, olabel, graph_cost, acoustic_cost,
                  hclg_graph_cost});
}

double TokenStore::FrameAcoustic(int t, int ilabel) {
  assert(!in_replay_ && "footstep replay must not read the likelihoods");
  ++acoustic_queries_;
  return AcousticCost(*ll_, t, ilabel, opts_.acoustic_scale);
}

std::pair<FState, double> TokenStore::StepOlabel(const FState &f,
                                                 int olabel) const {
  if (residual_ == nullptr || olabel == 0) return {f, 0.0};
  return residual_->Step(f, olabel);
}

DualCost TokenStore::FinalWeight(const Token &tok) const {
  DualCost w = hclg_->Final(tok.hclg_state);
  if (w.IsZero()) return DualCost::Zero();
  if (residual_ != nullptr) w.graph += residual_->FinalCost(tok.f_state);
  return w;
}

double TokenStore::FrameCutoff(int frame) const {
  const std::vector<int> &ids = frames_[frame];
  double best = kInf;
  for (int id : ids) best = std::min(best, arena_[id].tot_cost.Total());
  double cutoff = best + opts_.beam;
  if (static_cast<int>(ids.size()) > opts_.max_active) {
    std::vector<double> totals;
    totals.reserve(ids.size());
    for (int id : ids) totals.push_back(arena_[id].tot_cost.Total());
    std::nth_element(totals.begin(), totals.begin() + (opts_.max_active - 1),
                     totals.end());
    cutoff = std::min(cutoff, totals[opts_.max_active - 1]);
  }
  return cutoff;
}

int TokenStore::PruneTokens(int frontier, bool use_final_costs,
                            int pending_from_frame, int delete_below_frame) {
  double best_final = kInf;
  if (use_final_costs) {
    for (int id : frames_[frontier]) {
      const Token &tok = arena_[id];
      if (!tok.alive) continue;
      const DualCost w = FinalWeight(tok);
      if (w.IsZero()) continue;
      best_final = std::min(best_final, tok.tot_cost.Total() + w.Total());
    }
  }

  int deleted = 0;
  std::vector<int> order;
  for (int f = frontier; f >= 0; --f) {
    // Descending topological position, so every epsilon destination has its
    // extra cost settled before its sources look at it.
    order.assign(frames_[f].begin(), frames_[f].end());
    std::stable_sort(order.begin(), order.end(), [this](int a, int b) {
      return topo_pos_[arena_[a].hclg_state] > topo_pos_[arena_[b].hclg_state];
    });
    for (int id : order) {
      Token &tok = arena_[id];
      if (!tok.alive) continue;
      double extra = kInf;
      if (f == frontier) {
        if (use_final_costs) {
          const DualCost w = FinalWeight(tok);
          if (!w.IsZero()) extra = tok.tot_cost.Total() + w.Total() - best_final;
        } else {
          extra = 0.0;
        }
      }
      if (!tok.expanded && f >= pending_from_frame) extra = 0.0;

      const bool may_delete = f < delete_below_frame;
      std::size_t kept = 0;
      for (std::size_t i = 0; i < tok.links.size(); ++i) {
        const ForwardLink &link = tok.links[i];
        const Token &dest = arena_[link.dest];
        if (!dest.alive) continue;
        double link_extra =
            dest.extra_cost + tok.tot_cost.Total() + link.graph_cost +
            link.acoustic_cost - dest.tot_cost.Total();
        if (link_extra < 0.0) link_extra = 0.0;  // rounding guard
        if (may_delete && link_extra > opts_.lattice_beam) continue;
        extra = std::min(extra, link_extra);
        tok.links[kept++] = link;
      }
      tok.links.resize(kept);
      tok.extra_cost = extra;
      if (may_delete && extra > opts_.lattice_beam) {
        tok.alive = false;
        tok.links.clear();
        tok.links.shrink_to_fit();
        ++deleted;
      }
    }
  }
  return deleted;
}

Lattice TokenStore::BuildLattice(int num_frames) const {
  Lattice lat;
  lat.num_frames = num_frames;
  std::vector<int> state_of(arena_.size(), -1);
  for (int f = 0; f <= num_frames; ++f) {
    for (int id : frames_[f]) {
      if (arena_[id].alive) state_of[id] = lat.fst.AddState();
    }
  }
  if (arena_.empty() || state_of[0] < 0) {
    throw Error("lattice extraction lost the start token");
  }
  lat.fst.SetStart(state_of[0]);
  for (int f = 0; f <= num_frames; ++f) {
    for (int id : frames_[f]) {
      const Token &tok = arena_[id];
      if (!tok.alive) continue;
      for (const ForwardLink &link : tok.links) {
        assert(arena_[link.dest].alive);
        lat.fst.AddArc(state_of[id],
                       Arc(link.ilabel, link.olabel,
                           DualCost(link.graph_cost, link.acoustic_cost),
                           state_of[link.dest]));
      }
      if (tok.frame == num_frames) {
        const DualCost w = FinalWeight(tok);
        if (!w.IsZero()) lat.fst.SetFinal(state_of[id], w);
      }
    }
  }
  lat.fst.isymbols = hclg_->isymbols;
  lat.fst.osymbols = hclg_->osymbols;
  lat.fst.SortArcs();
  lat.fst.Validate();
  return lat;
}

std::vector<double> TokenStore::SurvivalCurve(int max_offset) const {
  std::vector<int> compact(arena_.size(), -1);
  std::vector<int> frame_of;
  int n = 0;
  for (std::size_t f = 0; f < frames_.size(); ++f) {
    for (int id : frames_[f]) {
      if (!arena_[id].alive) continue;
      compact[id] = n++;
      frame_of.push_back(static_cast<int>(f));
    }
  }
  std::vector<std::vector<int>> succ(n);
  for (std::size_t id = 0; id < arena_.size(); ++id) {
    if (compact[id] < 0) continue;
    for (const ForwardLink &link : arena_[id].links) {
      if (compact[link.dest] >= 0) {
        succ[compact[id]].push_back(compact[link.dest]);
      }
    }
  }
  const int last = static_cast<int>(frames_.size()) - 1;
  return internal::SurvivalFromGraph(frame_of, succ, last, max_offset);
}

int TokenStore::NumAliveTokens() const {
  int n = 0;
  for (const Token &tok : arena_) n += tok.alive ? 1 : 0;
  return n;
}

namespace {
const Wfst &ValidatedHclg(const BigLmGraph &graph) {
  graph.Validate();
  return *graph.hclg;
}
}  // namespace

LatticeDecoder::LatticeDecoder(const Wfst &hclg, const DecodeOptions &opts)
    : TokenStore(hclg, nullptr, opts) {}

LatticeDecoder::LatticeDecoder(const BigLmGraph &graph,
                               const DecodeOptions &opts)
    : TokenStore(ValidatedHclg(graph), graph.f, opts) {}

void LatticeDecoder::InitDecoding(const LogLikelihoods &ll) {
  if (hclg_->Empty()) throw DecodeError("decoding graph is empty", {});
  if (ll.num_labels < hclg_->MaxILabel()) {
    throw Error(StrCat("loglikes cover ", ll.num_labels,
                       " labels but the graph emits up to ",
                       hclg_->MaxILabel()));
  }
  Reset(&ll);
  buckets_.assign(hclg_->NumStates(), {});
  touched_buckets_.clear();
  EnsureFrame(0);
  const FState start_f =
      residual_ != nullptr ? residual_->Start() : FState{{0}, {0}};
  bool created = false, improved = false;
  FindOrAdd(0, hclg_->Start(), start_f, DualCost::One(), &created, &improved);
  ProcessNonemitting(0, opts_.beam);
  stats_.tokens_per_frame.push_back(static_cast<int>(frames_[0].size()));
  cur_frame_ = 0;
  next_cutoff_ = kInf;
}

void LatticeDecoder::AdvanceFrame() {
  if (Done()) throw Error("AdvanceFrame called past the last frame");
  const int t = cur_frame_;
  EnsureFrame(t + 1);
  ProcessEmitting(t);
  ProcessNonemitting(t + 1, next_cutoff_);
  stats_.tokens_per_frame.push_back(static_cast<int>(frames_[t + 1].size()));
  if (frames_[t + 1].empty()) {
    throw DecodeError(StrCat("no token survives to frame ", t + 1), stats_);
  }
  cur_frame_ = t + 1;
  if (cur_frame_ % opts_.prune_interval == 0 && !Done()) {
    PruneActiveTokens(false);
  }
}

void LatticeDecoder::ProcessEmitting(int t) {
  const double cur_cutoff = FrameCutoff(t);
  double next_cutoff = kInf;
  const std::vector<int> sources = frames_[t];
  for (int src : sources) {
    const int state = arena_[src].hclg_state;
    const FState f = arena_[src].f_state;
    const DualCost tot = arena_[src].tot_cost;
    if (tot.Total() > cur_cutoff) continue;
    for (const Arc &arc : hclg_->ArcsAt(state)) {
      if (arc.ilabel == 0) continue;
      const double ac = arc.weight.acoustic + FrameAcoustic(t, arc.ilabel);
      const auto [f2, rc] = StepOlabel(f, arc.olabel);
      const double gc = arc.weight.graph + rc;
      const DualCost nt(tot.graph + gc, tot.acoustic + ac);
      if (nt.Total() > next_cutoff) continue;
      if (nt.Total() + opts_.beam < next_cutoff) {
        next_cutoff = nt.Total() + opts_.beam;
      }
      bool created = false, improved = false;
      const int dest =
          FindOrAdd(t + 1, arc.next_state, f2, nt, &created, &improved);
      if (created || improved) ++stats_.propagations;
      AddLink(src, dest, arc.ilabel, arc.olabel, gc, ac, arc.weight.graph);
    }
  }
  next_cutoff_ = next_cutoff;
}

void LatticeDecoder::ProcessNonemitting(int frame, double cutoff) {
  for (int id : frames_[frame]) {
    const int p = topo_pos_[arena_[id].hclg_state];
    if (buckets_[p].empty()) touched_buckets_.push_back(p);
    buckets_[p].push_back(id);
  }
  for (int p = 0; p < static_cast<int>(buckets_.size()); ++p) {
    for (std::size_t i = 0; i < buckets_[p].size(); ++i) {
      const int src = buckets_[p][i];
      const int state = arena_[src].hclg_state;
      const FState f = arena_[src].f_state;
      const DualCost tot = arena_[src].tot_cost;
      if (tot.Total() > cutoff) continue;
      for (const Arc &arc : hclg_->ArcsAt(state)) {
        if (arc.ilabel != 0) break;  // arcs are sorted by input label
        const auto [f2, rc] = StepOlabel(f, arc.olabel);
        const double gc = arc.weight.graph + rc;
        const DualCost nt(tot.graph + gc, tot.acoustic + arc.weight.acoustic);
        if (nt.Total() > cutoff) continue;
        bool created = false, improved = false;
        const int dest =
            FindOrAdd(frame, arc.next_state, f2, nt, &created, &improved);
        if (created || improved) ++stats_.propagations;
        if (created) {
          const int q = topo_pos_[arc.next_state];
          if (buckets_[q].empty()) touched_buckets_.push_back(q);
          buckets_[q].push_back(dest);
        }
        AddLink(src, dest, 0, arc.olabel, gc, arc.weight.acoustic,
                arc.weight.graph);
      }
    }
  }
  for (int p : touched_buckets_) buckets_[p].clear();
  touched_buckets_.clear();
}

int LatticeDecoder::PruneActiveTokens(bool use_final_costs) {
  if (use_final_costs && !Done()) {
    throw Error("final-cost pruning before the last frame");
  }
  const int limit = use_final_costs ? cur_frame_ + 1 : cur_frame_;
  return PruneTokens(cur_frame_, use_final_costs,
                     std::numeric_limits<int>::max(), limit);
}

Lattice LatticeDecoder::Finalize() {
  if (!Done()) throw Error("Finalize before the last frame");
  bool any_final = false;
  for (int id : frames_[cur_frame_]) {
    if (arena_[id].alive && !FinalWeight(arena_[id]).IsZero()) {
      any_final = true;
      break;
    }
  }
  if (!any_final) {
    throw DecodeError("no token reaches a final state", stats_);
  }
  PruneActiveTokens(true);
  return BuildLattice(cur_frame_);
}

void LatticeDecoder::Run() {
  while (!Done()) AdvanceFrame();
}

std::pair<Lattice, DecodeStats> LatticeDecoder::Decode(
    const LogLikelihoods &ll) {
  const auto t0 = std::chrono::steady_clock::now();
  InitDecoding(ll);
  Run();
  Lattice lat = Finalize();
  const std::chrono::duration<double> wall =
      std::chrono::steady_clock::now() - t0;
  stats_.wall_seconds = wall.count();
  const double audio = ll.AudioSeconds();
  stats_.rtf = audio > 0 ? stats_.wall_seconds / audio : 0.0;
  return {std::move(lat), stats_};
}

std::pair<Lattice, DecodeStats> Decode(const Wfst &hclg,
                                       const LogLikelihoods &ll,
                                       const DecodeOptions &opts) {
  LatticeDecoder dec(hclg, opts);
  return dec.Decode(ll);
}

std::pair<Lattice, DecodeStats> DecodeBigLm(const BigLmGraph &graph,
                                            const LogLikelihoods &ll,
                                            const DecodeOptions &opts) {
  LatticeDecoder dec(graph, opts);
  return dec.Decode(ll);
}

}  // namespace latdec
