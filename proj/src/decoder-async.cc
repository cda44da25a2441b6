// latdec/decoder-async.cc

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

#include "latdec/decoder-async.h"

#include <algorithm>
#include <chrono>
#include <limits>

#include "latdec/util.h"

namespace latdec {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

const Wfst &ValidatedHclg(const BigLmGraph &graph) {
  graph.Validate();
  return *graph.hclg;
}
}  // namespace

AsyncDecoder::AsyncDecoder(const BigLmGraph &graph, const AsyncOptions &opts)
    : TokenStore(ValidatedHclg(graph), graph.f, opts), aopts_(opts) {
  aopts_.Check();
}

void AsyncDecoder::EnsureFrameAsync(int frame) {
  EnsureFrame(frame);
  if (static_cast<int>(classes_.size()) <= frame) classes_.resize(frame + 1);
}

int AsyncDecoder::FindOrAddAsync(int frame, int state, const FState &f,
                                 DualCost tot, bool *created,
                                 bool *improved) {
  const int id = FindOrAdd(frame, state, f, tot, created, improved);
  ClassInfo &cls = classes_[frame][state];
  if (*created) arena_[id].expanded = false;
  if ((*created || *improved) &&
      (cls.rep < 0 ||
       (cls.rep != id && arena_[id].tot_cost < arena_[cls.rep].tot_cost))) {
    cls.rep = id;
  }
  return id;
}

void AsyncDecoder::InitDecoding(const LogLikelihoods &ll) {
  if (hclg_->Empty()) throw DecodeError("decoding graph is empty", {});
  if (ll.num_labels < hclg_->MaxILabel()) {
    throw Error(StrCat("loglikes cover ", ll.num_labels,
                       " labels but the graph emits up to ",
                       hclg_->MaxILabel()));
  }
  Reset(&ll);
  classes_.clear();
  buckets_.assign(hclg_->NumStates(), {});
  touched_buckets_.clear();
  EnsureFrameAsync(0);
  const FState start_f = residual_->Start();
  bool created = false, improved = false;
  FindOrAddAsync(0, hclg_->Start(), start_f, DualCost::One(), &created,
                 &improved);
  ProcessNonemitting(0, opts_.beam);
  stats_.tokens_per_frame.push_back(static_cast<int>(frames_[0].size()));
  ex_frame_ = 0;
  bf_done_ = -1;
  next_cutoff_ = kInf;
}

void AsyncDecoder::AdvanceExploration() {
  if (ExplorationDone()) {
    throw Error("AdvanceExploration called past the last frame");
  }
  const int t = ex_frame_;
  EnsureFrameAsync(t + 1);
  ProcessEmitting(t);
  ProcessNonemitting(t + 1, next_cutoff_);
  stats_.tokens_per_frame.push_back(static_cast<int>(frames_[t + 1].size()));
  if (frames_[t + 1].empty()) {
    throw DecodeError(StrCat("no token survives to frame ", t + 1), stats_);
  }
  ex_frame_ = t + 1;
}

void AsyncDecoder::ProcessEmitting(int t) {
  const double cur_cutoff = FrameCutoff(t);
  double next_cutoff = kInf;
  const std::vector<int> sources = frames_[t];
  for (int src : sources) {
    if (!arena_[src].expanded) continue;  // suppressed class members wait
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
          FindOrAddAsync(t + 1, arc.next_state, f2, nt, &created, &improved);
      if (created || improved) ++stats_.propagations;
      AddLink(src, dest, arc.ilabel, arc.olabel, gc, ac, arc.weight.graph);
    }
  }
  next_cutoff_ = next_cutoff;
}

void AsyncDecoder::ProcessNonemitting(int frame, double cutoff) {
  for (int id : frames_[frame]) {
    const int p = topo_pos_[arena_[id].hclg_state];
    if (buckets_[p].empty()) touched_buckets_.push_back(p);
    buckets_[p].push_back(id);
  }
  for (int p = 0; p < static_cast<int>(buckets_.size()); ++p) {
    for (std::size_t i = 0; i < buckets_[p].size(); ++i) {
      const int src = buckets_[p][i];
      if (arena_[src].expanded) continue;  // duplicate bucket entry
      const int state = arena_[src].hclg_state;
      ClassInfo &cls = classes_[frame][state];
      if (cls.rep != src) continue;  // suppressed: backfill may admit later
      const FState f = arena_[src].f_state;
      const DualCost tot = arena_[src].tot_cost;
      if (tot.Total() > cutoff) continue;  // stays unexpanded, gate-dead
      arena_[src].expanded = true;
      if (cls.donor < 0) cls.donor = src;
      for (const Arc &arc : hclg_->ArcsAt(state)) {
        if (arc.ilabel != 0) break;  // arcs are sorted by input label
        const auto [f2, rc] = StepOlabel(f, arc.olabel);
        const double gc = arc.weight.graph + rc;
        const DualCost nt(tot.graph + gc, tot.acoustic + arc.weight.acoustic);
        if (nt.Total() > cutoff) continue;
        bool created = false, improved = false;
        const int dest =
            FindOrAddAsync(frame, arc.next_state, f2, nt, &created, &improved);
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

void AsyncDecoder::ComputeBackwardWindow(int u) {
  for (int f = u; f <= ex_frame_; ++f) {
    for (int id : frames_[f]) arena_[id].backward_cost = kInf;
  }
  for (int id : frames_[ex_frame_]) arena_[id].backward_cost = 0.0;
  std::vector<int> order;
  for (int f = ex_frame_ - 1; f >= u; --f) {
    // Descending topological order so epsilon destinations resolve first;
    // expanded tokens ahead of suppressed classmates so a donor's value is
    // ready when its class members borrow it.
    order.assign(frames_[f].begin(), frames_[f].end());
    std::stable_sort(order.begin(), order.end(), [this](int a, int b) {
      const int pa = topo_pos_[arena_[a].hclg_state];
      const int pb = topo_pos_[arena_[b].hclg_state];
      if (pa != pb) return pa > pb;
      return arena_[a].expanded > arena_[b].expanded;
    });
    for (int id : order) {
      Token &tok = arena_[id];
      if (!tok.expanded) {
        // A replay would copy the donor's continuations, so the donor's
        // estimate stands in until then.
        const ClassInfo &cls = classes_[f].at(tok.hclg_state);
        tok.backward_cost =
            cls.donor < 0 ? kInf : arena_[cls.donor].backward_cost;
        continue;
      }
      double best = kInf;
      for (const ForwardLink &link : tok.links) {
        const double c = link.graph_cost + link.acoustic_cost +
                         arena_[link.dest].backward_cost;
        if (c < best) best = c;
      }
      tok.backward_cost = best;
    }
  }
}

double AsyncDecoder::Hstar(int id) const {
  const Token &tok = arena_[id];
  const auto &frame_classes = classes_[tok.frame];
  const auto it = frame_classes.find(tok.hclg_state);
  if (it == frame_classes.end() || it->second.donor < 0) return kInf;
  return tok.tot_cost.Total() + arena_[it->second.donor].backward_cost;
}

void AsyncDecoder::BackfillNext() {
  if (bf_done_ >= ll_->num_frames) {
    throw Error("BackfillNext called past the last frame");
  }
  const int u = bf_done_ + 1;
  if (u > ex_frame_) throw Error("backfill cannot pass exploration");

  ComputeBackwardWindow(u);
  double ref = kInf;
  for (int id : frames_[u]) ref = std::min(ref, Hstar(id));
  const double gate = ref + aopts_.GateBeam();

  queue_ = {};
  for (int id : frames_[u]) {
    if (!arena_[id].expanded) queue_.emplace(Hstar(id), id);
  }
  in_replay_ = true;
  while (!queue_.empty()) {
    const int id = queue_.top().second;
    queue_.pop();
    const Token &tok = arena_[id];
    if (tok.expanded || !tok.alive) continue;
    if (Hstar(id) > gate) continue;  // may re-enter on a later improvement
    ReplayToken(id, u);
  }
  in_replay_ = false;
  bf_done_ = u;
}

void AsyncDecoder::ReplayToken(int id, int u) {
  const ClassInfo &cls = classes_[u].at(arena_[id].hclg_state);
  const int donor = cls.donor;
  if (donor < 0) return;  // class never explored; nothing to replay
  const FState f = arena_[id].f_state;
  const DualCost tot = arena_[id].tot_cost;
  arena_[id].expanded = true;
  const std::vector<ForwardLink> links = arena_[donor].links;
  for (const ForwardLink &link : links) {
    const int dest_frame = arena_[link.dest].frame;
    const int dest_state = arena_[link.dest].hclg_state;
    const auto [f2, rc] = StepOlabel(f, link.olabel);
    const double gc = link.hclg_graph_cost + rc;
    const DualCost nt(tot.graph + gc, tot.acoustic + link.acoustic_cost);
    bool created = false, improved = false;
    const int dest =
        FindOrAddAsync(dest_frame, dest_state, f2, nt, &created, &improved);
    if (created || improved) ++stats_.propagations_backfill;
    AddLink(id, dest, link.ilabel, link.olabel, gc, link.acoustic_cost,
            link.hclg_graph_cost);
    if (dest_frame == u && !arena_[dest].expanded && (created || improved)) {
      queue_.emplace(Hstar(dest), dest);
    }
    if (improved && arena_[dest].expanded) PropagateImprovement(dest, u);
  }
}

void AsyncDecoder::PropagateImprovement(int root, int u) {
  std::vector<int> work = {root};
  while (!work.empty()) {
    const int src = work.back();
    work.pop_back();
    const DualCost tot = arena_[src].tot_cost;
    for (const ForwardLink &link : arena_[src].links) {
      Token &dest = arena_[link.dest];
      if (!dest.alive) continue;
      const DualCost nt(tot.graph + link.graph_cost,
                        tot.acoustic + link.acoustic_cost);
      if (!(nt < dest.tot_cost)) continue;
      dest.tot_cost = nt;
      ++stats_.propagations_backfill;
      ClassInfo &cls = classes_[dest.frame][dest.hclg_state];
      if (cls.rep != link.dest &&
          (cls.rep < 0 || nt < arena_[cls.rep].tot_cost)) {
        cls.rep = link.dest;
      }
      if (dest.expanded) {
        work.push_back(link.dest);
      } else if (dest.frame == u) {
        queue_.emplace(Hstar(link.dest), link.dest);
      }
    }
  }
}

Lattice AsyncDecoder::Finalize() {
  if (!Done()) throw Error("Finalize before both fronts are done");
  bool any_final = false;
  for (int id : frames_[ex_frame_]) {
    if (arena_[id].alive && !FinalWeight(arena_[id]).IsZero()) {
      any_final = true;
      break;
    }
  }
  if (!any_final) {
    throw DecodeError("no token reaches a final state", stats_);
  }
  PruneTokens(ex_frame_, true, std::numeric_limits<int>::max(),
              ex_frame_ + 1);
  return BuildLattice(ex_frame_);
}

void AsyncDecoder::Run() {
  while (!Done()) {
    for (int i = 0; i < aopts_.front_batch && !ExplorationDone(); ++i) {
      AdvanceExploration();
    }
    const int target =
        ExplorationDone() ? ll_->num_frames : ex_frame_ - aopts_.offset;
    while (bf_done_ < target) {
      BackfillNext();
      if (bf_done_ > 0 && bf_done_ % opts_.prune_interval == 0 && !Done()) {
        PruneTokens(ex_frame_, false, bf_done_ + 1, bf_done_);
      }
    }
  }
}

std::pair<Lattice, DecodeStats> AsyncDecoder::Decode(
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

std::pair<Lattice, DecodeStats> DecodeAsync(const BigLmGraph &graph,
                                            const LogLikelihoods &ll,
                                            const AsyncOptions &opts) {
  AsyncDecoder dec(graph, opts);
  return dec.Decode(ll);
}

}  // namespace latdec
