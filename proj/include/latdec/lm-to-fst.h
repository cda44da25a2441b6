// latdec/lm-to-fst.h

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

#ifndef LATDEC_LM_TO_FST_H_
#define LATDEC_LM_TO_FST_H_

#include "latdec/arpa-lm.h"
#include "latdec/wfst.h"

namespace latdec {

// Materializes a backoff model as a word acceptor: one state per context,
// one arc per explicit entry, and an epsilon-input backoff arc per non-root
// context carrying the backoff cost. <s>/</s> get no arcs; sentence-end
// probability becomes the final weight of states with an explicit </s>
// entry. The shortest-path score of a sentence can undercut the model score
// when a backoff route is cheaper than an explicit entry, never the other
// way around. Errors on an empty model.
Wfst LmToFst(const BackoffLm &lm);

}  // namespace latdec

#endif  // LATDEC_LM_TO_FST_H_
