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

#ifndef AUDIT_SIMULATOR_H_
#define AUDIT_SIMULATOR_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "audit/common.h"
#include "audit/data_model.h"

namespace audit {

enum class SweepMode {
  kNone,
  // Per-video stance imbalance d ~ U(0, imbalance_max); lambda scales with d.
  kImbalance,
  // Per-video log-uniform comment volume; alpha and lambda scale with it.
  kVolume,
};

struct SimConfig {
  int n_videos = 65;
  int n_left = 9;
  int n_right = 8;
  int n_control = 5;
  int comments_per_video = 200;
  double p_left = 0.45;
  double p_right = 0.45;
  double p_neutral = 0.10;
  double alpha = 1.0;              // rich-get-richer strength
  double likes_per_comment = 10.0;
  double replies_per_comment = 1.0;
  double lambda = 0.0;             // personalization strength
  double epsilon = 0.05;           // per-account score noise
  int k = 10;                      // list length
  uint64_t seed = 1;
  double composition_jitter = 0.05;  // chance an account's k-th item is the (k+1)-th
  SweepMode sweep = SweepMode::kNone;
  double imbalance_max = 0.9;
  int volume_min = 50;
  int volume_max = 2000;
};

absl::Status ValidateSimConfig(const SimConfig& config);

// `key = value` schema; keys are the SimConfig field names, `sweep` takes
// none / imbalance / volume. Unset keys keep their defaults.
absl::StatusOr<SimConfig> ParseSimConfig(std::string_view text);
std::string SimConfigToText(const SimConfig& config);

// Parameters actually used for one video after the sweep is applied.
struct VideoParams {
  int n_comments = 0;
  double p_left = 0.0;
  double p_right = 0.0;
  double p_neutral = 0.0;
  double alpha = 0.0;
  double lambda = 0.0;
};

VideoParams ResolveVideoParams(const SimConfig& config, int video_index);

std::string SimVideoId(int video_index);  // "v0001", ...

// Comments with stance, text, and preferential-attachment likes and replies.
absl::StatusOr<std::vector<CommentRecord>> GenerateCommentPool(const SimConfig& config,
                                                               int video_index);

// The popularity top-k is visible to every account (with per-account
// jitter at position k); each account orders it by
// (1 - lambda) * pop + lambda * affinity + epsilon * N(0, 1).
absl::StatusOr<std::vector<RankedExposure>> GenerateRankings(
    const std::vector<CommentRecord>& pool, const std::vector<AuditAccount>& accounts,
    const SimConfig& config, int video_index, double lambda);

std::vector<AuditAccount> SimAccounts(const SimConfig& config);  // L01.., R01.., C01..

struct GroundTruth {
  struct Video {
    std::string video_id;
    VideoParams params;
  };
  std::vector<Video> videos;
  std::vector<AuditAccount> accounts;
  // Per-comment stance is carried by the dataset's comment records.
};

struct SimOutput {
  AuditDataset dataset;
  GroundTruth truth;
};

absl::StatusOr<SimOutput> RunSyntheticAudit(const SimConfig& config,
                                            Execution exec = Execution::kParallel);

// One JSON object per line: accounts, videos, then comments with stance.
std::string GroundTruthJsonl(const SimOutput& output);

// Dataset bundle plus ground_truth.jsonl and config.txt. Returns the
// manifest path.
absl::StatusOr<std::filesystem::path> WriteSimulation(const SimOutput& output,
                                                      const SimConfig& config,
                                                      const std::filesystem::path& dir);

}  // namespace audit

#endif  // AUDIT_SIMULATOR_H_
