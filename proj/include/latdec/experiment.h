// latdec/experiment.h

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

// Experiment driver behind the command-line tool: corpora on disk, decoder
// runs producing JSON/CSV reports, run comparison, and the canonical
// fixture suite.

#ifndef LATDEC_EXPERIMENT_H_
#define LATDEC_EXPERIMENT_H_

#include <cstdint>
#include <string>
#include <vector>

#include "latdec/decoder-common.h"
#include "latdec/lattice-tools.h"
#include "latdec/loglikes.h"
#include "latdec/symbol-table.h"

namespace latdec {

// One scored utterance: a likelihood matrix plus its reference transcript
// as graph output-label ids.
struct Utterance {
  std::string id;
  LogLikelihoods loglikes;
  std::vector<int> ref_ids;
};

struct Corpus {
  std::vector<Utterance> utterances;
};

// Corpus manifest: JSON lines {"id", "ref_ids", "ref_words", "loglikes"},
// one utterance per line. The loglikes field is a CSV path relative to the
// manifest; ref_words is informational only (ids are authoritative, since
// they must match the decoding graph's output labels). Reading loads every
// matrix eagerly and requires non-empty, unique ids. A path ending in
// ".csv" is accepted as a one-utterance corpus with an empty reference.
Corpus ReadCorpusFile(const std::string &path);
// Writes the manifest plus one "<id>.csv" per utterance next to it.
// `vocab` renders ref_words and may be null.
void WriteCorpusFile(const Corpus &corpus, const std::string &path,
                     const SymbolTable *vocab);

struct SynthesisSpec {
  int count = 0;  // 0 disables synthesis
  std::uint64_t seed = 1;
  double noise_sigma = 0.0;
};

// What to run. Exactly one utterance source: a corpus manifest, or a
// synthesis spec with count >= 1 (utterance i is synthesized from the
// decoding graph with seed `seed + i`).
struct ExperimentConfig {
  // decode | decode-biglm | decode-async | rescore
  std::string mode = "decode";
  std::string hclg_path;
  std::string lm_small_path;  // required by every mode except decode
  std::string lm_large_path;
  std::string corpus_path;
  SynthesisSpec synth;
  // offset / front_batch / backfill_beam only matter for decode-async;
  // the base fields apply to every mode.
  AsyncOptions opts;
  // Report directory; empty keeps the report in memory only.
  std::string out_dir;

  bool NeedsLms() const { return mode != "decode"; }
  // Throws Error on an unknown mode, missing mode-required inputs, both or
  // neither utterance source, or invalid options.
  void Check() const;
};

// Offsets covered by the per-utterance survival curves (0..20, capped at
// the utterance length).
inline constexpr int kSurvivalMaxOffset = 20;

struct UtteranceReport {
  std::string id;
  bool failed = false;
  std::string error;               // decode failure message
  std::vector<int> word_ids;       // best-path output labels
  std::vector<std::string> words;  // rendered via the vocabulary if known
  double total_cost = 0.0;
  double avg_loglike = 0.0;
  int num_frames = 0;
  double audio_seconds = 0.0;
  int ref_len = 0;
  WerResult wer;  // a failed decode scores as an empty hypothesis
  std::int64_t propagations = 0;
  std::int64_t propagations_backfill = 0;
  std::int64_t acoustic_queries = 0;
  // Pre-finalize survival curve, offsets 0..min(20, num_frames); empty
  // when the decode failed.
  std::vector<double> survival;
  double wall_seconds = 0.0;  // around the decode call only
};

struct RunSummary {
  std::string mode;
  int num_utterances = 0;
  int num_failed = 0;
  std::int64_t ref_len = 0;
  std::int64_t edits = 0;
  double wer_percent = 0.0;
  double mean_avg_loglike = 0.0;  // over decoded utterances
  std::int64_t propagations = 0;
  std::int64_t propagations_backfill = 0;
  std::int64_t acoustic_queries = 0;
  // survival_mean[k] averages curve[k] over the utterances whose curve
  // reaches offset k.
  std::vector<double> survival_mean;
  double total_audio_seconds = 0.0;
  double total_wall_seconds = 0.0;
  double rtf = 0.0;  // total wall over total audio, never the reverse
};

struct RunReport {
  ExperimentConfig config;
  RunSummary summary;
  std::vector<UtteranceReport> utterances;  // sorted by id
};

// Decodes the corpus (or synthesizes one), one decoder instance per
// utterance, and returns the report. A non-empty out_dir also gets
//   utterances.jsonl   one report object per line
//   summary.json       corpus aggregates plus the option echo
//   survival.csv       utt,offset,mean_active rows plus corpus_mean rows
//   sweep.csv          one summary row keyed by the pruning options
// Per-utterance decode failures are recorded in the report, not thrown.
// Everything except the wall-clock fields is reproducible bit for bit
// given the same inputs and seeds.
RunReport RunExperiment(const ExperimentConfig &cfg);

// Reads utterances.jsonl + summary.json back from a report directory.
RunReport ReadRunReport(const std::string &dir);

// The summary.json text for a report, for printing by the CLI.
std::string RunSummaryJson(const RunReport &report);

struct UtteranceDelta {
  std::string id;
  bool words_differ = false;  // by output-label ids
  bool failure_differs = false;
  double wer_delta = 0.0;  // b minus a, percent points
  double avg_ll_delta = 0.0;
  std::int64_t propagation_delta = 0;  // exploration + backfill
  double wall_delta = 0.0;
  bool avg_ll_flagged = false;  // |avg_ll_delta| >= 1e-4
};

struct CompareReport {
  std::vector<UtteranceDelta> utterances;  // sorted by id
  double wer_percent_delta = 0.0;
  double mean_avg_ll_delta = 0.0;
  std::int64_t propagation_delta = 0;
  std::int64_t propagation_delta_backfill = 0;
  double rtf_delta = 0.0;
  int num_word_diffs = 0;
  int num_flagged = 0;
  double max_abs_avg_ll_delta = 0.0;
};

// Per-utterance and aggregate deltas, b minus a. The reports must cover
// the same utterance ids. Numeric deltas over utterances that failed on
// either side are zero; the mismatch shows up in failure_differs.
CompareReport CompareRuns(const RunReport &a, const RunReport &b);

std::string CompareReportJson(const CompareReport &cmp);

// Canonical fixture suite: word symbols, unigram/bigram/trigram ARPA
// models over one vocabulary, a hand-authored word-loop graph, two
// composed decoding graphs, and ten-utterance corpora synthesized from the
// unigram graph at sigma 0, 1.5 and 3. Every artifact round-trips through
// the matching reader and is a pure function of the seed.
struct FixtureSuite {
  std::string words_path;
  std::string unigram_path, bigram_path, trigram_path;
  std::string hclg_hand_path;  // hand-authored over the same vocabulary
  std::string hclg_uni_path;   // compose(lexicon, unigram)
  std::string hclg_bi_path;    // compose(lexicon, bigram)
  std::vector<std::string> corpus_paths;  // manifests, sigma 0 / 1.5 / 3
  std::vector<std::string> all_files;     // everything written
};

FixtureSuite MakeFixtureSuite(const std::string &outdir, unsigned seed);

}  // namespace latdec

#endif  // LATDEC_EXPERIMENT_H_
