// Copyright 2026 The Comment Audit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: analyze, simulate, exposure, classify and
// eval-classifier.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "audit/common.h"
#include "audit/data_model.h"
#include "audit/llm_client.h"
#include "audit/report.h"
#include "audit/simulator.h"
#include "audit/stance.h"
#include "audit/text_io.h"

namespace {

int Fail(const absl::Status& status) {
  std::cerr << "audit: " << status << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Personalization audit of ranked comment exposure"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = runtime default)")->check(CLI::NonNegativeNumber);

  audit::AnalyzeOptions analyze;
  std::string data, out;
  auto* cmd_analyze = app.add_subcommand("analyze", "ANOSIM, features, correlations, PCA and clusters");
  cmd_analyze->add_option("--data", data, "Dataset manifest")->required()->check(CLI::ExistingFile);
  cmd_analyze->add_option("--k", analyze.k, "List depth")->check(CLI::PositiveNumber);
  cmd_analyze->add_option("--permutations", analyze.n_permutations, "Permutations per test")
      ->check(CLI::PositiveNumber);
  cmd_analyze->add_option("--seed", analyze.seed, "Master seed");
  cmd_analyze->add_option("--ipd-sample", analyze.ipd_sample, "Comments sampled for IPD")
      ->check(CLI::PositiveNumber);
  cmd_analyze->add_option("--clusters", analyze.kmeans_k, "k-means k")->check(CLI::PositiveNumber);
  cmd_analyze->add_option("--pca-retain", analyze.pca_retain, "Cumulative variance to retain")
      ->check(CLI::Range(0.0, 1.0));
  cmd_analyze->add_flag("--matrices", analyze.write_matrices, "Also write dissimilarity matrices");
  cmd_analyze->add_option("--out", out, "Output directory")->required();

  std::string config_path;
  auto* cmd_simulate = app.add_subcommand("simulate", "Generate a synthetic audit dataset");
  cmd_simulate->add_option("--config", config_path, "Key-value config file")->required()->check(CLI::ExistingFile);
  cmd_simulate->add_option("--out", out, "Output directory")->required();

  audit::ExposureOptions exposure;
  std::string stances;
  auto* cmd_exposure = app.add_subcommand("exposure", "Post-hoc IPD filter and positional exposure tests");
  cmd_exposure->add_option("--data", data, "Dataset manifest")->required()->check(CLI::ExistingFile);
  cmd_exposure->add_option("--stances", stances, "Stance CSV (default: stored comment stances)")
      ->check(CLI::ExistingFile);
  cmd_exposure->add_option("--ipd-threshold", exposure.ipd_threshold, "Keep videos below this IPD");
  cmd_exposure->add_option("--depth", exposure.depth, "Depth for post-hoc IPD")->check(CLI::PositiveNumber);
  cmd_exposure->add_option("--positions", exposure.max_position, "Test positions 1..N")
      ->check(CLI::PositiveNumber);
  cmd_exposure->add_option("--alpha", exposure.alpha, "Significance level")->check(CLI::Range(0.0, 1.0));
  cmd_exposure->add_option("--out", out, "Output directory")->required();

  int sample = 50;
  uint64_t seed = 0;
  bool stub = false;
  std::string cache_dir;
  auto* cmd_classify = app.add_subcommand("classify", "Sample comments per video and estimate stance shares");
  cmd_classify->add_option("--data", data, "Dataset manifest")->required()->check(CLI::ExistingFile);
  cmd_classify->add_option("--sample", sample, "Comments per video")->check(CLI::PositiveNumber);
  cmd_classify->add_option("--seed", seed, "Sampling seed");
  cmd_classify->add_flag("--stub", stub, "Offline lexicon classifier instead of the LLM endpoint");
  cmd_classify->add_option("--cache-dir", cache_dir, "Response cache directory");
  cmd_classify->add_option("--out", out, "Write the CSV here instead of stdout");

  std::string pred, gold;
  auto* cmd_eval = app.add_subcommand("eval-classifier", "Accuracy and Cohen's kappa of predictions");
  cmd_eval->add_option("--pred", pred, "Predicted labels CSV")->required()->check(CLI::ExistingFile);
  cmd_eval->add_option("--gold", gold, "Gold labels CSV")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);
  audit::SetWorkerCount(threads);

  if (*cmd_analyze) {
    const absl::Status s = audit::CmdAnalyze(data, analyze, out);
    return s.ok() ? 0 : Fail(s);
  }
  if (*cmd_simulate) {
    auto text = audit::ReadFileToString(config_path);
    if (!text.ok()) return Fail(text.status());
    auto config = audit::ParseSimConfig(*text);
    if (!config.ok()) return Fail(config.status());
    auto sim = audit::RunSyntheticAudit(*config);
    if (!sim.ok()) return Fail(sim.status());
    auto manifest = audit::WriteSimulation(*sim, *config, out);
    if (!manifest.ok()) return Fail(manifest.status());
    std::cout << manifest->string() << "\n";
    return 0;
  }
  if (*cmd_exposure) {
    const absl::Status s = audit::CmdExposure(data, stances, exposure, out);
    return s.ok() ? 0 : Fail(s);
  }
  if (*cmd_classify) {
    auto dataset = audit::LoadDataset(data);
    if (!dataset.ok()) return Fail(dataset.status());
    std::unique_ptr<audit::LlmStanceClassifier> llm;
    audit::CommentClassifier classifier;
    if (stub) {
      classifier = [](const audit::CommentRecord& c, std::string_view description) -> absl::StatusOr<audit::Stance> {
        return audit::ClassifyStub(c.text, description);
      };
    } else {
      auto config = audit::ClassifierConfigFromEnv();
      if (!config.ok()) return Fail(config.status());
      config->cache_dir = cache_dir;
      llm = std::make_unique<audit::LlmStanceClassifier>(*config, audit::MakeHttpTransport());
      classifier = llm->AsCommentClassifier();
    }
    auto csv = audit::ClassifySampleCsv(*dataset, sample, seed, classifier);
    if (!csv.ok()) return Fail(csv.status());
    if (out.empty()) {
      std::cout << *csv;
    } else if (absl::Status s = audit::WriteStringToFile(out, *csv); !s.ok()) {
      return Fail(s);
    }
    if (llm) {
      std::cerr << "requests: " << llm->network_requests() << ", cache hits: " << llm->cache_hits()
                << ", unlabeled: " << llm->unlabeled().size() << "\n";
    }
    return 0;
  }
  if (*cmd_eval) {
    auto json = audit::EvalClassifierJson(pred, gold);
    if (!json.ok()) return Fail(json.status());
    std::cout << *json;
    return 0;
  }
  return 0;
}
