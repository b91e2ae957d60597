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

#ifndef AUDIT_REPORT_H_
#define AUDIT_REPORT_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "audit/anosim.h"
#include "audit/common.h"
#include "audit/data_model.h"
#include "audit/rank_metrics.h"
#include "audit/stance.h"
#include "audit/structure_analysis.h"
#include "audit/video_features.h"

namespace audit {

enum class Grouping { kLeftRight, kLeftControl, kRightControl };

inline constexpr std::array<Grouping, 3> kAllGroupings = {
    Grouping::kLeftRight, Grouping::kLeftControl, Grouping::kRightControl};
inline constexpr std::array<Metric, 2> kAllMetrics = {Metric::kJaccard, Metric::kNdld};

std::string_view GroupingName(Grouping grouping);  // "L-R", "L-C", "R-C"

// Feature-table column for a grouping/metric pair, e.g. "R_LR_NDLD".
std::string RColumnName(Grouping grouping, Metric metric);

struct AnalyzeOptions {
  int k = 10;
  int n_permutations = 1000;
  uint64_t seed = 0;
  int ipd_sample = 50;
  int kmeans_k = 3;
  int kmeans_restarts = 10;
  double pca_retain = 0.90;
  bool write_matrices = false;
  Execution exec = Execution::kParallel;
};

struct VideoAnalysis {
  std::string video_id;
  double mean_jd = 0.0;
  double mean_ndld = 0.0;
  // [metric][grouping]; nullopt when a group has fewer than 2 accounts.
  std::array<std::array<std::optional<AnosimResult>, 3>, 2> anosim;
  VideoFeatures features;
  SampleEstimate ipd_sample;
  std::vector<DissimilarityMatrix> matrices;  // JD, NDLD

  const std::optional<AnosimResult>& result(Metric metric, Grouping grouping) const {
    return anosim[static_cast<size_t>(metric)][static_cast<size_t>(grouping)];
  }
};

// Matrices, the six ANOSIM tests and the structural features of one video.
// ANOSIM seeds are DeriveSeed(seed, video_index, grouping, metric); the IPD
// sample draws stored comment stances with DeriveSeed(seed, video_index, 7).
// Runs serially; callers fan out across videos.
absl::StatusOr<VideoAnalysis> AnalyzeVideo(const VideoRecord& video,
                                           const std::unordered_map<std::string, Group>& groups,
                                           size_t video_index, const AnalyzeOptions& options);

struct AuditReport {
  AnalyzeOptions options;
  std::vector<VideoAnalysis> videos;
  FeatureTable table;  // 4 features + 6 R columns, one row per video
  std::vector<HeatmapCell> correlations;
  std::optional<PcaResult> pca;
  std::vector<std::string> pca_video_ids;
  std::optional<ClusterResult> clusters;
  std::vector<ClusterComparison> cluster_tests;
  std::vector<std::string> notes;

  // File name -> contents for every report file.
  std::map<std::string, std::string> Render() const;
};

absl::StatusOr<AuditReport> BuildReport(const AuditDataset& dataset, const AnalyzeOptions& options);

// Writes every rendered file into `dir`; removes what it wrote on failure.
absl::Status WriteFiles(const std::map<std::string, std::string>& files,
                        const std::filesystem::path& dir);

absl::Status CmdAnalyze(const std::filesystem::path& manifest, const AnalyzeOptions& options,
                        const std::filesystem::path& out_dir);

// Stance labels: CSV with header comment_id,label or video_id,comment_id,label.
// Result is keyed by video_id; two-column files apply to every video.
absl::StatusOr<std::map<std::string, StanceMap>> ReadStanceCsv(const std::filesystem::path& path,
                                                               const AuditDataset& dataset);

struct ExposureOptions {
  double ipd_threshold = 0.8;
  int depth = 50;
  int max_position = 10;
  double alpha = 0.05;
};

struct ExposureReport {
  std::vector<std::pair<std::string, double>> posthoc_ipd;  // every video
  std::vector<std::string> kept;
  std::vector<ExposureTestResult> tests;  // kept videos, both leanings
};

absl::StatusOr<ExposureReport> RunExposure(const AuditDataset& dataset,
                                           const std::map<std::string, StanceMap>& stances,
                                           const ExposureOptions& options);

// With an empty `stances_csv` the comments' stored stances are used.
absl::Status CmdExposure(const std::filesystem::path& manifest,
                         const std::filesystem::path& stances_csv, const ExposureOptions& options,
                         const std::filesystem::path& out_dir);

// Per-video sampled stance counts, IPD and test-set selection as CSV.
absl::StatusOr<std::string> ClassifySampleCsv(const AuditDataset& dataset, int sample, uint64_t seed,
                                              const CommentClassifier& classifier);

// Joins two comment_id,label files on comment_id; JSON with accuracy,
// kappa, n and the confusion matrix.
absl::StatusOr<std::string> EvalClassifierJson(const std::filesystem::path& pred,
                                               const std::filesystem::path& gold);

}  // namespace audit

#endif  // AUDIT_REPORT_H_
