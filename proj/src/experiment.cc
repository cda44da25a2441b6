// latdec/experiment.cc

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

#include "latdec/experiment.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "latdec/arpa-lm.h"
#include "latdec/decoder-async.h"
#include "latdec/decoder-core.h"
#include "latdec/fixtures.h"
#include "latdec/lattice.h"
#include "latdec/residual.h"
#include "latdec/util.h"
#include "latdec/wfst.h"

namespace latdec {

namespace {

namespace fs = std::filesystem;
// Key order is preserved on dump, so reports diff cleanly line by line.
using Json = nlohmann::ordered_json;

double Seconds(std::chrono::steady_clock::duration d) {
  return std::chrono::duration<double>(d).count();
}

std::string UttId(int i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "utt%04d", i);
  return buf;
}

std::string RenderWord(const SymbolTable &vocab, int id) {
  const std::string &s = vocab.Find(id);
  return s.empty() ? StrCat(id) : s;
}

std::ofstream OpenForWrite(const fs::path &path) {
  std::ofstream out(path);
  if (!out) throw Error(StrCat("cannot write ", path.string()));
  return out;
}

Json ParseJson(const std::string &text, const std::string &where) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    throw ParseError(StrCat(where, ": ", e.what()));
  }
}

// ---------------------------------------------------------------------------
// Per-utterance decoding.

struct DecodeOutcome {
  bool failed = false;
  std::string error;
  Lattice lat;
  DecodeStats stats;
  std::int64_t acoustic_queries = 0;
  std::vector<double> survival;
  double wall_seconds = 0.0;
};

// Stepwise drive equivalent to the decoder's one-shot Decode(), but with
// the survival curve captured off the raw store between the last frame and
// the final prune. Only the decode work is timed; the curve is not.
template <typename Decoder>
DecodeOutcome DriveDecoder(Decoder &dec, const LogLikelihoods &ll) {
  using Clock = std::chrono::steady_clock;
  DecodeOutcome out;
  const auto t0 = Clock::now();
  try {
    dec.InitDecoding(ll);
    dec.Run();
  } catch (const DecodeError &e) {
    out.wall_seconds = Seconds(Clock::now() - t0);
    out.failed = true;
    out.error = e.what();
    out.stats = dec.Stats();
    out.acoustic_queries = dec.AcousticQueries();
    return out;
  }
  const auto t1 = Clock::now();
  out.survival =
      dec.SurvivalCurve(std::min(kSurvivalMaxOffset, ll.num_frames));
  const auto t2 = Clock::now();
  try {
    out.lat = dec.Finalize();
  } catch (const DecodeError &e) {
    out.failed = true;
    out.error = e.what();
    out.survival.clear();
  }
  out.wall_seconds = Seconds(t1 - t0) + Seconds(Clock::now() - t2);
  out.stats = dec.Stats();
  out.acoustic_queries = dec.AcousticQueries();
  return out;
}

DecodeOutcome RunOne(const std::string &mode, const Wfst &hclg,
                     const ResidualGrammar *residual,
                     const AsyncOptions &opts, const LogLikelihoods &ll) {
  if (mode == "decode-async") {
    AsyncDecoder dec(BigLmGraph{&hclg, residual}, opts);
    return DriveDecoder(dec, ll);
  }
  if (mode == "decode-biglm") {
    LatticeDecoder dec(BigLmGraph{&hclg, residual}, opts);
    return DriveDecoder(dec, ll);
  }
  // "decode", and the first pass of "rescore".
  LatticeDecoder dec(hclg, opts);
  DecodeOutcome out = DriveDecoder(dec, ll);
  if (mode == "rescore" && !out.failed) {
    const auto t0 = std::chrono::steady_clock::now();
    out.lat = RescoreLattice(out.lat, *residual);
    out.wall_seconds += Seconds(std::chrono::steady_clock::now() - t0);
  }
  return out;
}

UtteranceReport MakeUtteranceReport(const std::string &mode, const Wfst &hclg,
                                    const ResidualGrammar *residual,
                                    const SymbolTable *vocab,
                                    const AsyncOptions &opts,
                                    const Utterance &utt) {
  UtteranceReport rep;
  rep.id = utt.id;
  rep.num_frames = utt.loglikes.num_frames;
  rep.audio_seconds = utt.loglikes.AudioSeconds();
  rep.ref_len = static_cast<int>(utt.ref_ids.size());

  DecodeOutcome out;
  try {
    out = RunOne(mode, hclg, residual, opts, utt.loglikes);
    if (!out.failed) {
      const BestPath best = LatticeBestPath(out.lat);
      rep.word_ids = best.words;
      rep.total_cost = best.cost.Total();
      rep.avg_loglike = AvgLogLike(out.lat, utt.loglikes.num_frames);
    }
  } catch (const Error &e) {
    out.failed = true;
    out.error = e.what();
    out.survival.clear();
    rep.word_ids.clear();
    rep.total_cost = 0.0;
    rep.avg_loglike = 0.0;
  }
  rep.failed = out.failed;
  rep.error = out.error;
  rep.words.reserve(rep.word_ids.size());
  for (int id : rep.word_ids)
    rep.words.push_back(vocab ? RenderWord(*vocab, id) : StrCat(id));
  rep.wer = ComputeWer(utt.ref_ids, rep.word_ids);
  rep.propagations = out.stats.propagations;
  rep.propagations_backfill = out.stats.propagations_backfill;
  rep.acoustic_queries = out.acoustic_queries;
  rep.survival = std::move(out.survival);
  rep.wall_seconds = out.wall_seconds;
  return rep;
}

// ---------------------------------------------------------------------------
// Report (de)serialization.

Json WerJson(const WerResult &w) {
  Json j;
  j["substitutions"] = w.substitutions;
  j["deletions"] = w.deletions;
  j["insertions"] = w.insertions;
  j["percent"] = w.percent;
  j["degenerate"] = w.degenerate;
  return j;
}

WerResult WerFromJson(const Json &j) {
  WerResult w;
  w.substitutions = j.at("substitutions").get<int>();
  w.deletions = j.at("deletions").get<int>();
  w.insertions = j.at("insertions").get<int>();
  w.percent = j.at("percent").get<double>();
  w.degenerate = j.at("degenerate").get<bool>();
  return w;
}

Json UtteranceJson(const UtteranceReport &r) {
  Json j;
  j["id"] = r.id;
  j["failed"] = r.failed;
  j["error"] = r.error;
  j["word_ids"] = r.word_ids;
  j["words"] = r.words;
  j["total_cost"] = r.total_cost;
  j["avg_loglike"] = r.avg_loglike;
  j["num_frames"] = r.num_frames;
  j["audio_seconds"] = r.audio_seconds;
  j["ref_len"] = r.ref_len;
  j["wer"] = WerJson(r.wer);
  j["propagations"] = r.propagations;
  j["propagations_backfill"] = r.propagations_backfill;
  j["acoustic_queries"] = r.acoustic_queries;
  j["survival"] = r.survival;
  j["wall_seconds"] = r.wall_seconds;
  return j;
}

UtteranceReport UtteranceFromJson(const Json &j) {
  UtteranceReport r;
  r.id = j.at("id").get<std::string>();
  r.failed = j.at("failed").get<bool>();
  r.error = j.at("error").get<std::string>();
  r.word_ids = j.at("word_ids").get<std::vector<int>>();
  r.words = j.at("words").get<std::vector<std::string>>();
  r.total_cost = j.at("total_cost").get<double>();
  r.avg_loglike = j.at("avg_loglike").get<double>();
  r.num_frames = j.at("num_frames").get<int>();
  r.audio_seconds = j.at("audio_seconds").get<double>();
  r.ref_len = j.at("ref_len").get<int>();
  r.wer = WerFromJson(j.at("wer"));
  r.propagations = j.at("propagations").get<std::int64_t>();
  r.propagations_backfill = j.at("propagations_backfill").get<std::int64_t>();
  r.acoustic_queries = j.at("acoustic_queries").get<std::int64_t>();
  r.survival = j.at("survival").get<std::vector<double>>();
  r.wall_seconds = j.at("wall_seconds").get<double>();
  return r;
}

Json OptionsJson(const AsyncOptions &o) {
  Json j;
  j["beam"] = o.beam;
  j["max_active"] = o.max_active;
  j["lattice_beam"] = o.lattice_beam;
  j["acoustic_scale"] = o.acoustic_scale;
  j["prune_interval"] = o.prune_interval;
  j["offset"] = o.offset;
  j["front_batch"] = o.front_batch;
  j["backfill_beam"] = o.backfill_beam;
  return j;
}

void OptionsFromJson(const Json &j, AsyncOptions *o) {
  o->beam = j.at("beam").get<double>();
  o->max_active = j.at("max_active").get<int>();
  o->lattice_beam = j.at("lattice_beam").get<double>();
  o->acoustic_scale = j.at("acoustic_scale").get<double>();
  o->prune_interval = j.at("prune_interval").get<int>();
  o->offset = j.at("offset").get<int>();
  o->front_batch = j.at("front_batch").get<int>();
  o->backfill_beam = j.at("backfill_beam").get<double>();
}

Json SummaryJson(const RunReport &r) {
  const RunSummary &s = r.summary;
  Json j;
  j["mode"] = s.mode;
  j["num_utterances"] = s.num_utterances;
  j["num_failed"] = s.num_failed;
  Json wer;
  wer["percent"] = s.wer_percent;
  wer["edits"] = s.edits;
  wer["ref_len"] = s.ref_len;
  j["wer"] = wer;
  j["mean_avg_loglike"] = s.mean_avg_loglike;
  j["propagations"] = s.propagations;
  j["propagations_backfill"] = s.propagations_backfill;
  j["acoustic_queries"] = s.acoustic_queries;
  j["survival_mean"] = s.survival_mean;
  j["total_audio_seconds"] = s.total_audio_seconds;
  j["total_wall_seconds"] = s.total_wall_seconds;
  j["rtf"] = s.rtf;
  j["options"] = OptionsJson(r.config.opts);
  Json inputs;
  inputs["hclg"] = r.config.hclg_path;
  inputs["lm_small"] = r.config.lm_small_path;
  inputs["lm_large"] = r.config.lm_large_path;
  inputs["corpus"] = r.config.corpus_path;
  inputs["synth_count"] = r.config.synth.count;
  inputs["synth_seed"] = r.config.synth.seed;
  inputs["synth_sigma"] = r.config.synth.noise_sigma;
  j["inputs"] = inputs;
  return j;
}

void SummaryFromJson(const Json &j, RunReport *r) {
  RunSummary &s = r->summary;
  s.mode = j.at("mode").get<std::string>();
  s.num_utterances = j.at("num_utterances").get<int>();
  s.num_failed = j.at("num_failed").get<int>();
  s.wer_percent = j.at("wer").at("percent").get<double>();
  s.edits = j.at("wer").at("edits").get<std::int64_t>();
  s.ref_len = j.at("wer").at("ref_len").get<std::int64_t>();
  s.mean_avg_loglike = j.at("mean_avg_loglike").get<double>();
  s.propagations = j.at("propagations").get<std::int64_t>();
  s.propagations_backfill = j.at("propagations_backfill").get<std::int64_t>();
  s.acoustic_queries = j.at("acoustic_queries").get<std::int64_t>();
  s.survival_mean = j.at("survival_mean").get<std::vector<double>>();
  s.total_audio_seconds = j.at("total_audio_seconds").get<double>();
  s.total_wall_seconds = j.at("total_wall_seconds").get<double>();
  s.rtf = j.at("rtf").get<double>();
  r->config.mode = s.mode;
  OptionsFromJson(j.at("options"), &r->config.opts);
  const Json &inputs = j.at("inputs");
  r->config.hclg_path = inputs.at("hclg").get<std::string>();
  r->config.lm_small_path = inputs.at("lm_small").get<std::string>();
  r->config.lm_large_path = inputs.at("lm_large").get<std::string>();
  r->config.corpus_path = inputs.at("corpus").get<std::string>();
  r->config.synth.count = inputs.at("synth_count").get<int>();
  r->config.synth.seed = inputs.at("synth_seed").get<std::uint64_t>();
  r->config.synth.noise_sigma = inputs.at("synth_sigma").get<double>();
}

RunSummary Summarize(const ExperimentConfig &cfg,
                     const std::vector<UtteranceReport> &utts) {
  RunSummary s;
  s.mode = cfg.mode;
  s.num_utterances = static_cast<int>(utts.size());
  std::vector<double> sums;
  std::vector<int> counts;
  int decoded = 0;
  double ll_sum = 0.0;
  for (const UtteranceReport &u : utts) {
    if (u.failed) {
      ++s.num_failed;
    } else {
      ++decoded;
      ll_sum += u.avg_loglike;
    }
    s.ref_len += u.ref_len;
    s.edits += u.wer.Edits();
    s.propagations += u.propagations;
    s.propagations_backfill += u.propagations_backfill;
    s.acoustic_queries += u.acoustic_queries;
    s.total_audio_seconds += u.audio_seconds;
    s.total_wall_seconds += u.wall_seconds;
    if (u.survival.size() > sums.size()) {
      sums.resize(u.survival.size(), 0.0);
      counts.resize(u.survival.size(), 0);
    }
    for (std::size_t k = 0; k < u.survival.size(); ++k) {
      sums[k] += u.survival[k];
      ++counts[k];
    }
  }
  // Mirrors the single-utterance convention: an empty reference makes the
  // rate degenerate, so insertions count 100 apiece.
  s.wer_percent = s.ref_len > 0 ? 100.0 * static_cast<double>(s.edits) /
                                      static_cast<double>(s.ref_len)
                                : 100.0 * static_cast<double>(s.edits);
  s.mean_avg_loglike = decoded > 0 ? ll_sum / decoded : 0.0;
  s.survival_mean.reserve(sums.size());
  for (std::size_t k = 0; k < sums.size(); ++k)
    s.survival_mean.push_back(sums[k] / counts[k]);
  s.rtf = s.total_audio_seconds > 0.0
              ? s.total_wall_seconds / s.total_audio_seconds
              : 0.0;
  return s;
}

void WriteReportFiles(const RunReport &report) {
  const fs::path dir(report.config.out_dir);
  fs::create_directories(dir);
  {
    std::ofstream out = OpenForWrite(dir / "utterances.jsonl");
    for (const UtteranceReport &u : report.utterances)
      out << UtteranceJson(u).dump() << "\n";
  }
  {
    std::ofstream out = OpenForWrite(dir / "summary.json");
    out << SummaryJson(report).dump(2) << "\n";
  }
  {
    std::ofstream out = OpenForWrite(dir / "survival.csv");
    out << "utt,offset,mean_active\n";
    for (const UtteranceReport &u : report.utterances)
      for (std::size_t k = 0; k < u.survival.size(); ++k)
        out << u.id << ',' << k << ',' << StrCat(u.survival[k]) << "\n";
    const auto &mean = report.summary.survival_mean;
    for (std::size_t k = 0; k < mean.size(); ++k)
      out << "corpus_mean," << k << ',' << StrCat(mean[k]) << "\n";
  }
  {
    const RunSummary &s = report.summary;
    const AsyncOptions &o = report.config.opts;
    std::ofstream out = OpenForWrite(dir / "sweep.csv");
    out << "mode,beam,max_active,lattice_beam,acoustic_scale,offset,"
           "front_batch,backfill_beam,prune_interval,num_utterances,"
           "num_failed,wer_percent,mean_avg_loglike,rtf,propagations,"
           "propagations_backfill,acoustic_queries\n";
    out << StrCat(s.mode, ',', o.beam, ',', o.max_active, ',',
                  o.lattice_beam, ',', o.acoustic_scale, ',', o.offset, ',',
                  o.front_batch, ',', o.backfill_beam, ',', o.prune_interval,
                  ',', s.num_utterances, ',', s.num_failed, ',',
                  s.wer_percent, ',', s.mean_avg_loglike, ',', s.rtf, ',',
                  s.propagations, ',', s.propagations_backfill, ',',
                  s.acoustic_queries)
        << "\n";
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Corpus IO.

Corpus ReadCorpusFile(const std::string &path) {
  // A bare likelihoods CSV stands in for a one-utterance corpus with an
  // empty reference, so single matrices decode without a manifest.
  if (path.size() > 4 && path.compare(path.size() - 4, 4, ".csv") == 0) {
    Corpus corpus;
    corpus.utterances.push_back(Utterance{fs::path(path).stem().string(),
                                          ReadLogLikesFile(path),
                                          std::vector<int>{}});
    return corpus;
  }
  std::ifstream in(path);
  if (!in) throw Error(StrCat("cannot open corpus manifest ", path));
  const fs::path base = fs::path(path).parent_path();
  Corpus corpus;
  std::set<std::string> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (TrimWhitespace(line).empty()) continue;
    const std::string where = StrCat(path, ":", lineno);
    const Json j = ParseJson(line, where);
    Utterance utt;
    try {
      utt.id = j.at("id").get<std::string>();
      utt.ref_ids = j.at("ref_ids").get<std::vector<int>>();
      const auto rel = j.at("loglikes").get<std::string>();
      utt.loglikes = ReadLogLikesFile((base / rel).string());
    } catch (const nlohmann::json::exception &e) {
      throw ParseError(StrCat(where, ": ", e.what()));
    }
    if (utt.id.empty()) throw ParseError(StrCat(where, ": empty utterance id"));
    if (!seen.insert(utt.id).second)
      throw ParseError(StrCat(where, ": duplicate utterance id ", utt.id));
    corpus.utterances.push_back(std::move(utt));
  }
  if (corpus.utterances.empty())
    throw ParseError(StrCat(path, ": corpus has no utterances"));
  return corpus;
}

void WriteCorpusFile(const Corpus &corpus, const std::string &path,
                     const SymbolTable *vocab) {
  const fs::path manifest(path);
  if (manifest.has_parent_path())
    fs::create_directories(manifest.parent_path());
  std::ofstream out = OpenForWrite(manifest);
  for (const Utterance &utt : corpus.utterances) {
    if (utt.id.empty()) throw Error("corpus utterance without an id");
    const std::string csv = utt.id + ".csv";
    WriteLogLikesFile(utt.loglikes, (manifest.parent_path() / csv).string());
    Json j;
    j["id"] = utt.id;
    j["ref_ids"] = utt.ref_ids;
    std::vector<std::string> words;
    if (vocab != nullptr) {
      words.reserve(utt.ref_ids.size());
      for (int id : utt.ref_ids) words.push_back(RenderWord(*vocab, id));
    }
    j["ref_words"] = words;
    j["loglikes"] = csv;
    out << j.dump() << "\n";
  }
}

// ---------------------------------------------------------------------------
// Experiment runs.

void ExperimentConfig::Check() const {
  if (mode != "decode" && mode != "decode-biglm" && mode != "decode-async" &&
      mode != "rescore") {
    throw Error(StrCat("unknown mode \"", mode,
                       "\"; expected decode, decode-biglm, decode-async or "
                       "rescore"));
  }
  if (hclg_path.empty()) throw Error("an HCLG graph path is required");
  if (NeedsLms() && (lm_small_path.empty() || lm_large_path.empty()))
    throw Error(StrCat("mode ", mode, " needs both language models"));
  const bool has_corpus = !corpus_path.empty();
  const bool has_synth = synth.count > 0;
  if (has_corpus == has_synth)
    throw Error(
        "exactly one utterance source: a corpus manifest or synth_count >= 1");
  if (has_synth && !(synth.noise_sigma >= 0.0))
    throw Error("synth noise_sigma must be >= 0");
  if (mode == "decode-async") {
    opts.Check();
  } else {
    opts.DecodeOptions::Check();
  }
}

RunReport RunExperiment(const ExperimentConfig &cfg) {
  cfg.Check();

  RunReport report;
  report.config = cfg;

  const Wfst hclg = ReadTextFstFile(cfg.hclg_path);
  std::shared_ptr<const BackoffLm> small_lm, large_lm;
  std::unique_ptr<ResidualGrammar> residual;
  if (cfg.NeedsLms()) {
    auto vocab = std::make_shared<SymbolTable>();
    small_lm = std::make_shared<BackoffLm>(
        BackoffLm::LoadArpaFile(cfg.lm_small_path, vocab));
    large_lm = std::make_shared<BackoffLm>(
        BackoffLm::LoadArpaFile(cfg.lm_large_path, vocab));
    residual = std::make_unique<ResidualGrammar>(small_lm, large_lm);
  }
  const SymbolTable *vocab = small_lm ? small_lm->Vocab().get() : nullptr;

  Corpus corpus;
  if (!cfg.corpus_path.empty()) {
    corpus = ReadCorpusFile(cfg.corpus_path);
  } else {
    corpus.utterances.reserve(cfg.synth.count);
    for (int i = 0; i < cfg.synth.count; ++i) {
      SynthesisResult synth =
          SynthesizeLogLikes(hclg, cfg.synth.seed + i, cfg.synth.noise_sigma);
      corpus.utterances.push_back(
          Utterance{UttId(i), std::move(synth.loglikes), synth.words});
    }
  }

  report.utterances.reserve(corpus.utterances.size());
  for (const Utterance &utt : corpus.utterances) {
    report.utterances.push_back(MakeUtteranceReport(
        cfg.mode, hclg, residual.get(), vocab, cfg.opts, utt));
  }
  std::sort(report.utterances.begin(), report.utterances.end(),
            [](const UtteranceReport &a, const UtteranceReport &b) {
              return a.id < b.id;
            });
  report.summary = Summarize(cfg, report.utterances);
  if (!cfg.out_dir.empty()) WriteReportFiles(report);
  return report;
}

std::string RunSummaryJson(const RunReport &report) {
  return SummaryJson(report).dump(2);
}

RunReport ReadRunReport(const std::string &dir) {
  const fs::path base(dir);
  RunReport report;
  {
    std::ifstream in(base / "summary.json");
    if (!in) throw Error(StrCat("cannot open ", (base / "summary.json").string()));
    std::ostringstream text;
    text << in.rdbuf();
    const Json j = ParseJson(text.str(), (base / "summary.json").string());
    try {
      SummaryFromJson(j, &report);
    } catch (const nlohmann::json::exception &e) {
      throw ParseError(StrCat((base / "summary.json").string(), ": ", e.what()));
    }
  }
  {
    const fs::path path = base / "utterances.jsonl";
    std::ifstream in(path);
    if (!in) throw Error(StrCat("cannot open ", path.string()));
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (TrimWhitespace(line).empty()) continue;
      const std::string where = StrCat(path.string(), ":", lineno);
      const Json j = ParseJson(line, where);
      try {
        report.utterances.push_back(UtteranceFromJson(j));
      } catch (const nlohmann::json::exception &e) {
        throw ParseError(StrCat(where, ": ", e.what()));
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Run comparison.

CompareReport CompareRuns(const RunReport &a, const RunReport &b) {
  std::map<std::string, const UtteranceReport *> in_b;
  for (const UtteranceReport &u : b.utterances) in_b[u.id] = &u;
  if (a.utterances.size() != in_b.size())
    throw Error(StrCat("reports cover different utterance sets: ",
                       a.utterances.size(), " vs ", in_b.size()));

  CompareReport cmp;
  cmp.utterances.reserve(a.utterances.size());
  for (const UtteranceReport &ua : a.utterances) {
    const auto it = in_b.find(ua.id);
    if (it == in_b.end())
      throw Error(
          StrCat("utterance ", ua.id, " is missing from the second report"));
    const UtteranceReport &ub = *it->second;
    UtteranceDelta d;
    d.id = ua.id;
    d.failure_differs = ua.failed != ub.failed;
    d.words_differ = d.failure_differs || ua.word_ids != ub.word_ids;
    if (!ua.failed && !ub.failed) {
      d.wer_delta = ub.wer.percent - ua.wer.percent;
      d.avg_ll_delta = ub.avg_loglike - ua.avg_loglike;
      d.propagation_delta = (ub.propagations + ub.propagations_backfill) -
                            (ua.propagations + ua.propagations_backfill);
      d.wall_delta = ub.wall_seconds - ua.wall_seconds;
      d.avg_ll_flagged = std::fabs(d.avg_ll_delta) >= 1e-4;
    }
    if (d.words_differ) ++cmp.num_word_diffs;
    if (d.avg_ll_flagged) ++cmp.num_flagged;
    cmp.max_abs_avg_ll_delta =
        std::max(cmp.max_abs_avg_ll_delta, std::fabs(d.avg_ll_delta));
    cmp.utterances.push_back(std::move(d));
  }
  std::sort(cmp.utterances.begin(), cmp.utterances.end(),
            [](const UtteranceDelta &x, const UtteranceDelta &y) {
              return x.id < y.id;
            });
  cmp.wer_percent_delta = b.summary.wer_percent - a.summary.wer_percent;
  cmp.mean_avg_ll_delta =
      b.summary.mean_avg_loglike - a.summary.mean_avg_loglike;
  cmp.propagation_delta =
      (b.summary.propagations + b.summary.propagations_backfill) -
      (a.summary.propagations + a.summary.propagations_backfill);
  cmp.propagation_delta_backfill =
      b.summary.propagations_backfill - a.summary.propagations_backfill;
  cmp.rtf_delta = b.summary.rtf - a.summary.rtf;
  return cmp;
}

std::string CompareReportJson(const CompareReport &cmp) {
  Json j;
  Json agg;
  agg["wer_percent_delta"] = cmp.wer_percent_delta;
  agg["mean_avg_ll_delta"] = cmp.mean_avg_ll_delta;
  agg["propagation_delta"] = cmp.propagation_delta;
  agg["propagation_delta_backfill"] = cmp.propagation_delta_backfill;
  agg["rtf_delta"] = cmp.rtf_delta;
  agg["num_word_diffs"] = cmp.num_word_diffs;
  agg["num_flagged"] = cmp.num_flagged;
  agg["max_abs_avg_ll_delta"] = cmp.max_abs_avg_ll_delta;
  j["aggregate"] = agg;
  Json utts = Json::array();
  for (const UtteranceDelta &d : cmp.utterances) {
    Json u;
    u["id"] = d.id;
    u["words_differ"] = d.words_differ;
    u["failure_differs"] = d.failure_differs;
    u["wer_delta"] = d.wer_delta;
    u["avg_ll_delta"] = d.avg_ll_delta;
    u["propagation_delta"] = d.propagation_delta;
    u["wall_delta"] = d.wall_delta;
    u["avg_ll_flagged"] = d.avg_ll_flagged;
    utts.push_back(std::move(u));
  }
  j["utterances"] = utts;
  return j.dump(2);
}

// ---------------------------------------------------------------------------
// Fixture suite.

FixtureSuite MakeFixtureSuite(const std::string &outdir, unsigned seed) {
  const fs::path dir(outdir);
  fs::create_directories(dir);
  FixtureSuite suite;

  const std::vector<std::string> words = {"w1", "w2", "w3", "w4", "w5"};
  ArpaSpec spec;
  spec.words = words;
  spec.order = 1;
  spec.seed = seed;
  const std::string uni_text = RandomArpa(spec);
  spec.order = 2;
  spec.seed = seed + 1000003u;
  const std::string bi_text = RandomArpa(spec);
  spec.order = 3;
  spec.seed = seed + 2000003u;
  const std::string tri_text = RandomArpa(spec);

  // One shared vocabulary. The generated models list their unigrams in the
  // same word order, so any of the files reproduces these ids when loaded
  // into a fresh table.
  auto vocab = std::make_shared<SymbolTable>();
  auto load = [&vocab](const std::string &text) {
    std::istringstream in(text);
    return std::make_shared<BackoffLm>(BackoffLm::LoadArpa(in, vocab));
  };
  const auto uni_lm = load(uni_text);
  const auto bi_lm = load(bi_text);
  load(tri_text);  // parses or throws; only the text is kept

  auto put = [&suite, &dir](const std::string &name, const std::string &text,
                            std::string *field) {
    const fs::path path = dir / name;
    std::ofstream out = OpenForWrite(path);
    out << text;
    *field = path.string();
    suite.all_files.push_back(path.string());
  };
  put("unigram.arpa", uni_text, &suite.unigram_path);
  put("bigram.arpa", bi_text, &suite.bigram_path);
  put("trigram.arpa", tri_text, &suite.trigram_path);
  {
    const fs::path path = dir / "words.txt";
    vocab->WriteFile(path.string());
    suite.words_path = path.string();
    suite.all_files.push_back(path.string());
  }

  LexiconSpec lex;
  lex.num_words = static_cast<int>(words.size());
  lex.shared_first = 2;     // confusable word onsets
  lex.self_loop_cost = 0.5; // variable word durations
  const Wfst lexicon = BuildLexicon(lex, vocab);
  const Wfst hclg_uni = BuildDecodingGraph(lexicon, *uni_lm);
  const Wfst hclg_bi = BuildDecodingGraph(lexicon, *bi_lm);

  // Hand-authored counterpart: a flat word loop over the first three words,
  // two emitting phones per word, fixed graph costs.
  Wfst hand;
  const int root = hand.AddState();
  hand.SetStart(root);
  hand.SetFinal(root, DualCost::One());
  const double hand_costs[] = {0.7, 0.9, 1.2};
  for (int k = 0; k < 3; ++k) {
    const int word = vocab->Find(words[k]);
    const int mid = hand.AddState();
    hand.AddArc(root, Arc(1 + k, word, DualCost(hand_costs[k], 0.0), mid));
    hand.AddArc(mid, Arc(4 + k, 0, DualCost::One(), root));
  }
  hand.SortArcs();
  hand.Validate();

  auto put_fst = [&suite, &dir](const std::string &name, const Wfst &fst,
                                std::string *field) {
    const fs::path path = dir / name;
    WriteTextFstFile(fst, path.string());
    *field = path.string();
    suite.all_files.push_back(path.string());
  };
  put_fst("hclg-hand.fst", hand, &suite.hclg_hand_path);
  put_fst("hclg-uni.fst", hclg_uni, &suite.hclg_uni_path);
  put_fst("hclg-bi.fst", hclg_bi, &suite.hclg_bi_path);

  const double sigmas[] = {0.0, 1.5, 3.0};
  const char *names[] = {"corpus-sigma0", "corpus-sigma1_5", "corpus-sigma3"};
  for (int s = 0; s < 3; ++s) {
    Corpus corpus;
    for (int i = 0; i < 10; ++i) {
      SynthesisResult synth = SynthesizeLogLikes(
          hclg_uni,
          static_cast<std::uint64_t>(seed) * 100003u + 1000u * s + i,
          sigmas[s]);
      corpus.utterances.push_back(
          Utterance{UttId(i), std::move(synth.loglikes), synth.words});
    }
    const fs::path manifest = dir / names[s] / "corpus.jsonl";
    WriteCorpusFile(corpus, manifest.string(), vocab.get());
    suite.corpus_paths.push_back(manifest.string());
    suite.all_files.push_back(manifest.string());
    for (const Utterance &utt : corpus.utterances)
      suite.all_files.push_back((dir / names[s] / (utt.id + ".csv")).string());
  }
  return suite;
}

}  // namespace latdec
