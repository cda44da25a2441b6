// latdec/compose.h

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

#ifndef LATDEC_COMPOSE_H_
#define LATDEC_COMPOSE_H_

#include "latdec/wfst.h"

namespace latdec {

// Static composition a o b with epsilon sequencing: between two matched
// labels, output-epsilon moves of `a` must all precede input-epsilon moves
// of `b`, so each pair of compatible operand paths contributes exactly one
// composed path (weights multiply componentwise). Requires b's arcs sorted
// by ilabel (all loaders/builders guarantee this) and b free of input-eps
// cycles. The result is trimmed.
Wfst Compose(const Wfst &a, const Wfst &b);

}  // namespace latdec

#endif  // LATDEC_COMPOSE_H_
