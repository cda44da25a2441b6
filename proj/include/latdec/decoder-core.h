// latdec/decoder-core.h

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

#ifndef LATDEC_DECODER_CORE_H_
#define LATDEC_DECODER_CORE_H_

#include <cstdint>
#include <limits>
#include <unordered_map>
#include <utility>
#include <vector>

#include "latdec/decoder-common.h"
#include "latdec/lattice.h"
#include "latdec/loglikes.h"
#include "latdec/residual.h"
#include "latdec/wfst.h"

namespace latdec {

// HCLG graph paired with the on-demand residual grammar. Neither is owned.
struct BigLmGraph {
  const Wfst *hclg = nullptr;
  const ResidualGrammar *f = nullptr;

  // Throws Error unless every nonzero HCLG output label is scoreable by
  // both residual models (directly or through <unk>).
  void Validate() const;
};

// Arc taken during decoding. graph_cost already includes the residual
// contribution; hclg_graph_cost keeps the bare graph weight so backfill can
// replay the arc under a different F-state.
struct ForwardLink {
  int dest = -1;  // token id
  int ilabel = 0;
  int olabel = 0;
  double graph_cost = 0.0;
  double acoustic_cost = 0.0;
  double hclg_graph_cost = 0.0;
};

struct Token {
  int hclg_state = -1;
  FState f_state{{0}, {0}};
  int frame = 0;
  DualCost tot_cost;       // f(s), the accumulated forward cost
  double extra_cost = 0.0; // slack vs. the best lattice path through here
  // g*(s), estimate to the exploration frontier; async decoding only.
  double backward_cost = std::numeric_limits<double>::infinity();
  std::vector<ForwardLink> links;
  bool expanded = true;    // arcs walked; async marks suppressed tokens false
  bool alive = true;
};

// Token arena, per-frame indices, pruning and lattice extraction shared by
// the synchronous and asynchronous decoders. Every iteration runs over
// creation-ordered vectors plus input-sorted arcs, so results never depend
// on hash-map layout.
class TokenStore {
 public:
  const DecodeStats &Stats() const { return stats_; }
  std::int64_t AcousticQueries() const { return acoustic_queries_; }

  // Survival curve of the current store (see lattice.h). Meaningful before
  // the final prune; afterwards every token is connected everywhere.
  std::vector<double> SurvivalCurve(int max_offset) const;

  // Tokens and links alive in the store; exposed for tests.
  int NumAliveTokens() const;
  const Token &TokenAt(int id) const { return arena_[id]; }
  const std::vector<int> &FrameTokens(int frame) const {
    return frames_[frame];
  }

 protected:
  TokenStore(const Wfst &hclg, const ResidualGrammar *residual,
             const DecodeOptions &opts);

  struct Key {
    int state;
    FState f;
    bool operator==(const Key &o) const {
      return state == o.state && f == o.f;
    }
  };
  struct KeyHash {
    std::size_t operator()(const Key &k) const {
      std::uint64_t h = static_cast<std::uint64_t>(k.state);
      h = h * 0x9e3779b97f4a7c15ull + static_cast<std::uint32_t>(k.f.small.ctx);
      h = h * 0x9e3779b97f4a7c15ull + static_cast<std::uint32_t>(k.f.large.ctx);
      return static_cast<std::size_t>(h ^ (h >> 32));
    }
  };

  void Reset(const LogLikelihoods *ll);
  void EnsureFrame(int frame);

  // Returns the token id for (frame, state, f), creating it or improving
  // its cost. Exactly one of *created / *improved becomes true when the
  // expansion was effective.
  int FindOrAdd(int frame, int state, const FState &f, DualCost tot,
                bool *created, bool *improved);

  void AddLink(int src, int dest, int ilabel, int olabel, double graph_cost,
               double acoustic_cost, double hclg_graph_cost);

  // -acoustic_scale * loglike; counts the query and rejects calls from
  // footstep replay, which must never touch the likelihoods.
  double FrameAcoustic(int t, int ilabel);

  // Residual advance on an output label; epsilon is free and stays put.
  std::pair<FState, double> StepOlabel(const FState &f, int olabel) const;

  // Graph final weight with the residual final cost folded into the graph
  // component; Zero() when the state is not final.
  DualCost FinalWeight(const Token &tok) const;

  // Beam + histogram cutoff over a frame's tokens: min(best + beam,
  // max_active-th cheapest total). Ties at the histogram boundary pass.
  double FrameCutoff(int frame) const;

  // Backward extra-cost pass from `frontier` down to frame 0.
  //   use_final_costs: frontier extras come from folded final weights
  //     (non-final frontier tokens become unreachable); otherwise every
  //     frontier token starts at slack 0.
  //   pending_from_frame: un-expanded tokens at frames >= this also start
  //     at slack 0 (their continuations are not known yet).
  //   delete_below_frame: tokens at frames < this may be deleted and their
  //     links filtered; later frames only have extras refreshed.
  // Returns the number of tokens deleted.
  int PruneTokens(int frontier, bool use_final_costs, int pending_from_frame,
                  int delete_below_frame);

  // Lattice over alive tokens, frames 0..num_frames. Requires a prior
  // final-cost prune so that dangling structure is gone.
  Lattice BuildLattice(int num_frames) const;

  const Wfst *hclg_;
  const ResidualGrammar *residual_;  // null for the single-graph decoder
  DecodeOptions opts_;
  const LogLikelihoods *ll_ = nullptr;
  std::vector<int> topo_pos_;  // epsilon-subgraph topological position

  std::vector<Token> arena_;
  std::vector<std::vector<int>> frames_;  // token ids in creation order
  std::vector<std::unordered_map<Key, int, KeyHash>> maps_;
  DecodeStats stats_;
  std::int64_t acoustic_queries_ = 0;
  bool in_replay_ = false;
};

// Lattice-generating token-passing decoder over a single HCLG graph, or
// over (HCLG-state, F-state) pairs when a residual grammar is supplied.
// Token identity is (frame, hclg_state, f_state); the single-graph decoder
// pins f_state to a constant so both modes share one control flow.
class LatticeDecoder : public TokenStore {
 public:
  LatticeDecoder(const Wfst &hclg, const DecodeOptions &opts);
  LatticeDecoder(const BigLmGraph &graph, const DecodeOptions &opts);

  // InitDecoding + all frames + Finalize, with wall time and RTF filled in.
  std::pair<Lattice, DecodeStats> Decode(const LogLikelihoods &ll);

  // Stepwise interface. The LogLikelihoods must outlive decoding.
  void InitDecoding(const LogLikelihoods &ll);
  bool Done() const { return cur_frame_ >= ll_->num_frames; }
  void AdvanceFrame();
  // All remaining frames; the raw store can then be inspected (for
  // instance SurvivalCurve) before Finalize prunes it.
  void Run();
  // Lattice prune at the current frontier; returns deleted token count.
  // Runs with final costs once decoding is Done() and `use_final_costs`.
  int PruneActiveTokens(bool use_final_costs);
  Lattice Finalize();

 private:
  void ProcessEmitting(int t);
  void ProcessNonemitting(int frame, double cutoff);

  int cur_frame_ = 0;
  double next_cutoff_ = std::numeric_limits<double>::infinity();
  // Epsilon-closure worklist, bucketed by topological position.
  std::vector<std::vector<int>> buckets_;
  std::vector<int> touched_buckets_;
};

std::pair<Lattice, DecodeStats> Decode(const Wfst &hclg,
                                       const LogLikelihoods &ll,
                                       const DecodeOptions &opts);
std::pair<Lattice, DecodeStats> DecodeBigLm(const BigLmGraph &graph,
                                            const LogLikelihoods &ll,
                                            const DecodeOptions &opts);

}  // namespace latdec

#endif  // LATDEC_DECODER_CORE_H_
