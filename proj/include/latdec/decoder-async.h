// latdec/decoder-async.h

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

// Asynchronous two-front lattice decoder over (HCLG state, F state) pairs.
//
// The exploration front runs a plain token-passing search that expands one
// representative per (frame, HCLG state) class, so it touches the acoustic
// scores exactly as often as a single-graph decoder would. Tokens that land
// in an already-represented class are suppressed: kept, costed, but not
// expanded. A backfill front trails `offset` frames behind. For each frame
// it computes backward costs g* to the exploration frontier, then admits
// suppressed tokens whose bound f(u) + g*(class donor) lies within
// GateBeam() of the frame's best, expanding them by replaying the donor's
// recorded arcs: acoustic costs are copied verbatim, only the residual
// grammar component is recomputed for the token's own F state. Backfill
// never reads the likelihood matrix; a replay that tried would assert.
//
// With pruning disabled and an unbounded gate the backfill closure expands
// every suppressed token with the donor's complete arc set, which makes the
// final lattice identical to the synchronous BigLM decoder's.

#ifndef LATDEC_DECODER_ASYNC_H_
#define LATDEC_DECODER_ASYNC_H_

#include <functional>
#include <queue>
#include <unordered_map>
#include <utility>
#include <vector>

#include "latdec/decoder-common.h"
#include "latdec/decoder-core.h"
#include "latdec/lattice.h"
#include "latdec/loglikes.h"

namespace latdec {

class AsyncDecoder : public TokenStore {
 public:
  AsyncDecoder(const BigLmGraph &graph, const AsyncOptions &opts);

  // InitDecoding + interleaved fronts + Finalize, with wall time and RTF.
  std::pair<Lattice, DecodeStats> Decode(const LogLikelihoods &ll);

  // Stepwise interface, mainly for tests and instrumentation. The driver in
  // Decode() advances exploration front_batch frames at a time and then
  // backfills every frame at least `offset` behind; once exploration hits
  // the last frame, backfill drains through it.
  void InitDecoding(const LogLikelihoods &ll);
  bool ExplorationDone() const { return ex_frame_ >= ll_->num_frames; }
  bool Done() const { return ExplorationDone() && bf_done_ >= ll_->num_frames; }
  void AdvanceExploration();
  void BackfillNext();  // runs the backfill pass for frame BackfillFrontier()+1
  // Both fronts to completion, with the periodic mid-decode prunes the
  // one-shot Decode() applies; the raw store can then be inspected before
  // Finalize prunes it.
  void Run();
  int ExplorationFrontier() const { return ex_frame_; }
  int BackfillFrontier() const { return bf_done_; }
  Lattice Finalize();

 private:
  // Best-cost member and first-expanded member of a (frame, state) class.
  // The donor's links are what replays copy; it never changes once set.
  struct ClassInfo {
    int rep = -1;
    int donor = -1;
  };

  void EnsureFrameAsync(int frame);
  int FindOrAddAsync(int frame, int state, const FState &f, DualCost tot,
                     bool *created, bool *improved);
  void ProcessEmitting(int t);
  void ProcessNonemitting(int frame, double cutoff);

  // Fills Token::backward_cost for frames [u, ExplorationFrontier()]:
  // frontier tokens seed 0, earlier frames relax over recorded links in
  // descending topological order.
  void ComputeBackwardWindow(int u);
  // f(token) + g*(donor of its class); +inf when the class has no donor.
  double Hstar(int id) const;
  void ReplayToken(int id, int u);
  // Forward cost relaxation over existing links after a token improved.
  void PropagateImprovement(int root, int u);

  AsyncOptions aopts_;
  int ex_frame_ = 0;
  int bf_done_ = -1;
  std::vector<std::unordered_map<int, ClassInfo>> classes_;  // by frame

  double next_cutoff_ = 0.0;
  // Epsilon-closure worklist, bucketed by topological position.
  std::vector<std::vector<int>> buckets_;
  std::vector<int> touched_buckets_;

  // In-pass queue of backfill candidates, cheapest bound first; ties break
  // on creation order. Re-pushed on improvement, deduplicated at pop.
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue_;
};

std::pair<Lattice, DecodeStats> DecodeAsync(const BigLmGraph &graph,
                                            const LogLikelihoods &ll,
                                            const AsyncOptions &opts);

}  // namespace latdec

#endif  // LATDEC_DECODER_ASYNC_H_
