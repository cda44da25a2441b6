// latdec/loglikes.h

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

#ifndef LATDEC_LOGLIKES_H_
#define LATDEC_LOGLIKES_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "latdec/wfst.h"

namespace latdec {

// Per-frame natural-log likelihoods for each emitting label. Column i-1
// belongs to ilabel i; label 0 (epsilon) consumes no frame. Immutable in
// spirit: fill it once, then share.
struct LogLikelihoods {
  int num_frames = 0;
  int num_labels = 0;
  std::vector<std::vector<double>> values;  // [frame][label-1]
  double frame_shift = 0.01;                // seconds of audio per frame

  double AudioSeconds() const { return num_frames * frame_shift; }
};

// cost = -scale * values[frame][ilabel-1]. Throws on out-of-range frame or
// label. Linear in scale, so scale 0 makes every acoustic cost 0.
double AcousticCost(const LogLikelihoods &ll, int frame, int ilabel,
                    double scale);

// CSV exchange format: first row "frames,labels" counts, then one row per
// frame with `labels` comma-separated finite values.
LogLikelihoods ReadLogLikes(std::istream &in);
LogLikelihoods ReadLogLikesFile(const std::string &path);
void WriteLogLikes(const LogLikelihoods &ll, std::ostream &out);
void WriteLogLikesFile(const LogLikelihoods &ll, const std::string &path);

struct SynthesisResult {
  LogLikelihoods loglikes;
  std::vector<int> words;    // olabels of the generating path, eps dropped
  std::vector<int> ilabels;  // emitting ilabels, one per frame
};

// Stands in for a trained acoustic model: picks an accepting path of
// `graph` (a random walk, or the given emitting-label sequence) and emits a
// matrix where the path's label has mean 0 per frame and every other label
// mean -4, plus Gaussian noise of spread noise_sigma. Deterministic in
// (graph, seed, noise_sigma, true_path). Throws when the graph has no
// accepting path, or none matching true_path.
SynthesisResult SynthesizeLogLikes(const Wfst &graph, std::uint64_t seed,
                                   double noise_sigma,
                                   const std::vector<int> *true_path = nullptr);

}  // namespace latdec

#endif  // LATDEC_LOGLIKES_H_
