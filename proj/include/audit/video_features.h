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

#ifndef AUDIT_VIDEO_FEATURES_H_
#define AUDIT_VIDEO_FEATURES_H_

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "audit/common.h"
#include "audit/data_model.h"
#include "audit/stance.h"

namespace audit {

enum class IpdNormalization {
  kPartisanOnly,  // |L - R| / (L + R)
  kAllComments,   // |L - R| / (L + R + N), sensitivity alternative
};

struct VideoFeatures {
  std::string video_id;
  double log_volume = 0.0;
  double gini_likes = 0.0;
  double gini_replies = 0.0;
  std::optional<double> ipd;  // missing when no partisan comments were sampled
};

// Imbalance of partisan discussion; 0 = balanced, 1 = one-sided.
absl::StatusOr<double> Ipd(const StanceCounts& counts,
                           IpdNormalization normalization = IpdNormalization::kPartisanOnly);

// Volume and engagement-inequality features of one video; IPD from the
// sampled stance counts (left missing when undefined).
absl::StatusOr<VideoFeatures> ComputeFeatures(
    const VideoRecord& video, const StanceCounts& sampled_stances,
    IpdNormalization normalization = IpdNormalization::kPartisanOnly);

// Keeps videos with >= min_comments comments whose sampled left and right
// shares both reach min_partisan_share.
absl::StatusOr<std::vector<std::string>> SelectTestVideos(
    const std::vector<VideoRecord>& videos, const std::map<std::string, StanceCounts>& sampled,
    int64_t min_comments = 50, double min_partisan_share = 0.25);

// comment_id -> leaning.
using StanceMap = std::unordered_map<std::string, Leaning>;

// Leanings from the comments' own stance field.
StanceMap StanceMapFromComments(const VideoRecord& video);

// IPD over the distinct comments seen in any account's top-`depth` list.
absl::StatusOr<double> PosthocIpd(const VideoRecord& video, const StanceMap& stances,
                                  int depth = 50);

// Videos with post-hoc IPD strictly below `threshold`. `stance_maps` is
// keyed by video_id.
absl::StatusOr<std::vector<std::string>> PosthocIpdFilter(
    const std::vector<VideoRecord>& videos, const std::map<std::string, StanceMap>& stance_maps,
    double threshold = 0.8, int depth = 50);

struct PositionalExposure {
  std::vector<double> left_accounts;   // one indicator per L account
  std::vector<double> right_accounts;  // one indicator per R account
};

// For each partisan account, 1 if the comment at 1-based position k has the
// queried leaning, else 0. Control accounts are ignored.
absl::StatusOr<PositionalExposure> ComputePositionalExposure(
    const VideoRecord& video, const std::unordered_map<std::string, Group>& groups,
    const StanceMap& stances, int k, Leaning leaning);

struct ExposureTestResult {
  std::string video_id;
  int position = 0;
  Leaning leaning = Leaning::kLeft;
  double mean_prop_left_accounts = 0.0;
  double mean_prop_right_accounts = 0.0;
  double difference = 0.0;  // L accounts minus R accounts
  double u = 0.0;
  double p_two_sided = 1.0;
  bool significant = false;
};

// One Mann-Whitney test per position.
absl::StatusOr<std::vector<ExposureTestResult>> ExposureDifferenceTest(
    const VideoRecord& video, const std::unordered_map<std::string, Group>& groups,
    const StanceMap& stances, const std::vector<int>& positions, Leaning leaning,
    double alpha = 0.05);

struct FypComposition {
  double prop_left = 0.0;
  double prop_right = 0.0;
  double prop_neutral = 0.0;
  double prop_nonpolitical = 0.0;
};

absl::Status ValidateComposition(const FypComposition& composition);

// Trained iff the political share (left + right + neutral) exceeds the
// threshold and the target leaning outweighs the opposing one.
bool ValidateAccount(const FypComposition& composition, Group target,
                     double political_threshold = 0.35);

std::string FeaturesCsv(const std::vector<VideoFeatures>& features);
std::string ExposureTestsCsv(const std::vector<ExposureTestResult>& results);

}  // namespace audit

#endif  // AUDIT_VIDEO_FEATURES_H_
