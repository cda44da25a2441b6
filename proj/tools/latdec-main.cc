// latdec/tools/latdec-main.cc

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

// Command-line driver. Exit code 0 on success; anything else prints a
// one-line {"error": ...} object to stdout and returns nonzero, so callers
// can always parse the output.

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "latdec/experiment.h"
#include "latdec/util.h"

namespace {

std::string ErrorJson(const std::string &message) {
  nlohmann::json j;
  j["error"] = message;
  return j.dump();
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"latdec: WFST lattice decoding experiments"};
  app.require_subcommand(1);

  latdec::ExperimentConfig cfg;
  CLI::App *run = app.add_subcommand(
      "run", "decode a corpus and write JSON/CSV reports");
  run->add_option("--mode", cfg.mode,
                  "decode | decode-biglm | decode-async | rescore")
      ->required();
  run->add_option("--hclg", cfg.hclg_path, "decoding graph, text FST format")
      ->required();
  run->add_option("--lm-small", cfg.lm_small_path,
                  "ARPA model baked into the graph");
  run->add_option("--lm-large", cfg.lm_large_path, "ARPA model to apply");
  run->add_option("--loglikes", cfg.corpus_path,
                  "corpus manifest (.jsonl) or a single loglikes CSV");
  run->add_option("--synth-count", cfg.synth.count,
                  "synthesize this many utterances instead");
  run->add_option("--synth-seed", cfg.synth.seed, "synthesis base seed");
  run->add_option("--synth-sigma", cfg.synth.noise_sigma,
                  "synthesis noise sigma");
  run->add_option("--beam", cfg.opts.beam, "decoding beam");
  run->add_option("--max-active", cfg.opts.max_active,
                  "histogram pruning bound");
  run->add_option("--lattice-beam", cfg.opts.lattice_beam, "lattice beam");
  run->add_option("--acoustic-scale", cfg.opts.acoustic_scale,
                  "likelihood scale");
  run->add_option("--offset", cfg.opts.offset,
                  "frames the backfill front trails by (decode-async)");
  run->add_option("--front-batch", cfg.opts.front_batch,
                  "exploration frames per front turn (decode-async)");
  run->add_option("--backfill-beam", cfg.opts.backfill_beam,
                  "A* gate slack; negative follows --lattice-beam");
  run->add_option("--prune-interval", cfg.opts.prune_interval,
                  "frames between periodic lattice prunes");
  run->add_option("--out", cfg.out_dir, "report directory")->required();

  std::string report_a, report_b, compare_out;
  CLI::App *compare =
      app.add_subcommand("compare", "diff two run report directories");
  compare->add_option("report_a", report_a, "baseline report directory")
      ->required();
  compare->add_option("report_b", report_b, "candidate report directory")
      ->required();
  compare->add_option("--out", compare_out, "also write the diff JSON here");

  std::string fixtures_out;
  unsigned fixtures_seed = 1;
  CLI::App *fixtures = app.add_subcommand(
      "make-fixtures", "write the canonical graph/model/corpus suite");
  fixtures->add_option("--out", fixtures_out, "suite directory")->required();
  fixtures->add_option("--synth-seed", fixtures_seed, "generation seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    std::cout << ErrorJson(e.what()) << std::endl;
    return e.get_exit_code() != 0 ? e.get_exit_code() : 1;
  }

  try {
    if (run->parsed()) {
      const latdec::RunReport report = latdec::RunExperiment(cfg);
      std::cout << latdec::RunSummaryJson(report) << std::endl;
    } else if (compare->parsed()) {
      const latdec::CompareReport cmp = latdec::CompareRuns(
          latdec::ReadRunReport(report_a), latdec::ReadRunReport(report_b));
      const std::string text = latdec::CompareReportJson(cmp);
      if (!compare_out.empty()) {
        std::ofstream out(compare_out);
        if (!out)
          throw latdec::Error(latdec::StrCat("cannot write ", compare_out));
        out << text << "\n";
      }
      std::cout << text << std::endl;
    } else if (fixtures->parsed()) {
      const latdec::FixtureSuite suite =
          latdec::MakeFixtureSuite(fixtures_out, fixtures_seed);
      nlohmann::ordered_json j;
      j["words"] = suite.words_path;
      j["arpa"] = {suite.unigram_path, suite.bigram_path, suite.trigram_path};
      j["graphs"] = {suite.hclg_hand_path, suite.hclg_uni_path,
                     suite.hclg_bi_path};
      j["corpora"] = suite.corpus_paths;
      j["num_files"] = suite.all_files.size();
      std::cout << j.dump(2) << std::endl;
    }
  } catch (const std::exception &e) {
    std::cout << ErrorJson(e.what()) << std::endl;
    return 1;
  }
  return 0;
}
