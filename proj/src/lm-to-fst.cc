// latdec/lm-to-fst.cc

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

#include "latdec/lm-to-fst.h"

#include "latdec/util.h"

namespace latdec {

Wfst LmToFst(const BackoffLm &lm) {
  if (lm.RegularWords().empty())
    throw Error("cannot materialize a model with no regular words");
  Wfst fst;
  for (int c = 0; c < lm.NumContexts(); ++c) fst.AddState();
  fst.SetStart(lm.Start().ctx);
  for (int c = 0; c < lm.NumContexts(); ++c) {
    const LmState s{c};
    for (const auto &[word, entry] : lm.EntriesAt(s)) {
      if (word == lm.BosId()) continue;
      if (word == lm.EosId()) {
        fst.SetFinal(c, DualCost(entry.cost, 0.0));
        continue;
      }
      fst.AddArc(c, Arc(word, word, DualCost(entry.cost, 0.0),
                        entry.next_ctx));
    }
    if (!lm.History(s).empty())
      fst.AddArc(c, Arc(0, 0, DualCost(lm.BackoffCost(s), 0.0),
                        lm.BackoffState(s).ctx));
    if (!lm.HasSentenceEnd()) fst.SetFinal(c, DualCost::One());
  }
  fst.isymbols = lm.Vocab();
  fst.osymbols = lm.Vocab();
  Connect(&fst);
  fst.SortArcs();
  fst.Validate();
  return fst;
}

}  // namespace latdec
