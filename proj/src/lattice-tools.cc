// latdec/lattice-tools.cc

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

#include "latdec/lattice-tools.h"

#include <algorithm>
#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include "latdec/util.h"

namespace latdec {

Lattice RescoreLattice(const Lattice &lat, const ResidualGrammar &f) {
  Lattice out;
  out.num_frames = lat.num_frames;
  if (lat.fst.Empty()) return out;

  using Key = std::tuple<int, int, int>;  // lattice state, small ctx, large ctx
  std::map<Key, int> ids;
  std::vector<std::pair<int, FState>> nodes;
  const auto intern = [&](int state, const FState &fs) {
    const Key key{state, fs.small.ctx, fs.large.ctx};
    const auto [it, created] =
        ids.emplace(key, static_cast<int>(nodes.size()));
    if (created) {
      nodes.emplace_back(state, fs);
      out.fst.AddState();
      const DualCost final = lat.fst.Final(state);
      if (!final.IsZero()) {
        out.fst.SetFinal(it->second,
                         Times(final, DualCost(f.FinalCost(fs), 0.0)));
      }
    }
    return it->second;
  };

  out.fst.SetStart(intern(lat.fst.Start(), f.Start()));
  for (int id = 0; id < static_cast<int>(nodes.size()); ++id) {
    const auto [state, fs] = nodes[id];
    for (const Arc &arc : lat.fst.ArcsAt(state)) {
      FState f2 = fs;
      double rc = 0.0;
      if (arc.olabel != 0) std::tie(f2, rc) = f.Step(fs, arc.olabel);
      const DualCost w(arc.weight.graph + rc, arc.weight.acoustic);
      out.fst.AddArc(id, Arc(arc.ilabel, arc.olabel, w,
                             intern(arc.next_state, f2)));
    }
  }
  Connect(&out.fst);
  out.fst.SortArcs();
  if (!out.fst.Empty()) out.fst.Validate();
  return out;
}

double AvgLogLike(const Lattice &lat, int num_frames) {
  if (num_frames < 1) {
    throw Error(StrCat("avg_loglike needs at least one frame, got ",
                       num_frames));
  }
  return -LatticeBestPath(lat).cost.Total() / num_frames;
}

WerResult ComputeWer(const std::vector<int> &ref,
                     const std::vector<int> &hyp) {
  const int n = static_cast<int>(ref.size());
  const int m = static_cast<int>(hyp.size());
  std::vector<std::vector<int>> d(n + 1, std::vector<int>(m + 1, 0));
  for (int i = 1; i <= n; ++i) d[i][0] = i;
  for (int j = 1; j <= m; ++j) d[0][j] = j;
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= m; ++j) {
      const int sub = d[i - 1][j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      d[i][j] = std::min({sub, d[i - 1][j] + 1, d[i][j - 1] + 1});
    }
  }

  WerResult r;
  int i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && ref[i - 1] == hyp[j - 1] &&
        d[i][j] == d[i - 1][j - 1]) {
      --i, --j;
    } else if (i > 0 && j > 0 && d[i][j] == d[i - 1][j - 1] + 1) {
      ++r.substitutions;
      --i, --j;
    } else if (i > 0 && d[i][j] == d[i - 1][j] + 1) {
      ++r.deletions;
      --i;
    } else {
      ++r.insertions;
      --j;
    }
  }
  if (n > 0) {
    r.percent = 100.0 * r.Edits() / n;
  } else {
    r.percent = 100.0 * m;
    r.degenerate = m > 0;
  }
  return r;
}

}  // namespace latdec
