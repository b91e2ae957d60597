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

#include "audit/video_features.h"

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <unordered_set>

#include "absl/strings/str_cat.h"
#include "audit/group_stats.h"
#include "audit/text_io.h"

namespace audit {

absl::StatusOr<double> Ipd(const StanceCounts& counts, IpdNormalization normalization) {
  if (counts.n_left < 0 || counts.n_right < 0 || counts.n_neutral < 0) {
    return absl::InvalidArgumentError("negative stance count");
  }
  const int64_t partisan = counts.n_left + counts.n_right;
  if (partisan == 0) return absl::InvalidArgumentError("IPD undefined: no partisan comments");
  const int64_t denom =
      normalization == IpdNormalization::kPartisanOnly ? partisan : counts.total();
  return static_cast<double>(std::llabs(counts.n_left - counts.n_right)) /
         static_cast<double>(denom);
}

absl::StatusOr<VideoFeatures> ComputeFeatures(const VideoRecord& video,
                                              const StanceCounts& sampled_stances,
                                              IpdNormalization normalization) {
  if (video.comments.size() < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("video \"", video.video_id, "\" has fewer than 2 comments"));
  }
  std::vector<double> likes, replies;
  for (const auto& c : video.comments) {
    likes.push_back(static_cast<double>(c.like_count));
    replies.push_back(static_cast<double>(c.reply_count));
  }
  VideoFeatures f;
  f.video_id = video.video_id;
  f.log_volume = std::log(static_cast<double>(video.comments.size()));
  AUDIT_ASSIGN_OR_RETURN(f.gini_likes, Gini(likes));
  AUDIT_ASSIGN_OR_RETURN(f.gini_replies, Gini(replies));
  if (auto ipd = Ipd(sampled_stances, normalization); ipd.ok()) f.ipd = *ipd;
  return f;
}

absl::StatusOr<std::vector<std::string>> SelectTestVideos(
    const std::vector<VideoRecord>& videos, const std::map<std::string, StanceCounts>& sampled,
    int64_t min_comments, double min_partisan_share) {
  std::vector<std::string> kept;
  for (const auto& v : videos) {
    if (static_cast<int64_t>(v.comments.size()) < min_comments) continue;
    auto it = sampled.find(v.video_id);
    if (it == sampled.end()) {
      return absl::InvalidArgumentError(
          absl::StrCat("no stance sample for candidate video \"", v.video_id, "\""));
    }
    const StanceCounts& c = it->second;
    const double n = static_cast<double>(c.total());
    if (n <= 0) continue;
    if (static_cast<double>(c.n_left) / n >= min_partisan_share &&
        static_cast<double>(c.n_right) / n >= min_partisan_share) {
      kept.push_back(v.video_id);
    }
  }
  return kept;
}

StanceMap StanceMapFromComments(const VideoRecord& video) {
  StanceMap out;
  for (const auto& c : video.comments) {
    if (c.stance) out.emplace(c.comment_id, CollapseStance(*c.stance));
  }
  return out;
}

absl::StatusOr<double> PosthocIpd(const VideoRecord& video, const StanceMap& stances, int depth) {
  std::unordered_set<std::string_view> seen;
  StanceCounts counts;
  for (const auto& e : video.exposures) {
    const size_t n = std::min(e.items.size(), static_cast<size_t>(depth));
    for (size_t i = 0; i < n; ++i) {
      if (!seen.insert(e.items[i]).second) continue;
      auto it = stances.find(e.items[i]);
      if (it == stances.end()) {
        return absl::InvalidArgumentError(absl::StrCat("unlabeled comment \"", e.items[i],
                                                       "\" on video \"", video.video_id, "\""));
      }
      counts.Add(it->second);
    }
  }
  return Ipd(counts);
}

absl::StatusOr<std::vector<std::string>> PosthocIpdFilter(
    const std::vector<VideoRecord>& videos, const std::map<std::string, StanceMap>& stance_maps,
    double threshold, int depth) {
  std::vector<std::string> kept;
  for (const auto& v : videos) {
    auto it = stance_maps.find(v.video_id);
    if (it == stance_maps.end()) {
      return absl::InvalidArgumentError(absl::StrCat("no stance labels for video \"", v.video_id, "\""));
    }
    AUDIT_ASSIGN_OR_RETURN(double ipd, PosthocIpd(v, it->second, depth));
    if (ipd < threshold) kept.push_back(v.video_id);
  }
  return kept;
}

absl::StatusOr<PositionalExposure> ComputePositionalExposure(
    const VideoRecord& video, const std::unordered_map<std::string, Group>& groups,
    const StanceMap& stances, int k, Leaning leaning) {
  if (k < 1) return absl::InvalidArgumentError("position must be >= 1");
  PositionalExposure out;
  for (const auto& e : video.exposures) {
    auto g = groups.find(e.account_id);
    if (g == groups.end()) {
      return absl::InvalidArgumentError(absl::StrCat("unknown account \"", e.account_id, "\""));
    }
    if (g->second == Group::kControl) continue;
    if (static_cast<size_t>(k) > e.items.size()) {
      return absl::OutOfRangeError(absl::StrCat("position ", k, " exceeds the list of account \"",
                                                e.account_id, "\" on video \"", video.video_id,
                                                "\""));
    }
    const std::string& item = e.items[static_cast<size_t>(k - 1)];
    auto s = stances.find(item);
    if (s == stances.end()) {
      return absl::InvalidArgumentError(absl::StrCat("unlabeled comment \"", item, "\""));
    }
    const double hit = s->second == leaning ? 1.0 : 0.0;
    (g->second == Group::kLeft ? out.left_accounts : out.right_accounts).push_back(hit);
  }
  return out;
}

absl::StatusOr<std::vector<ExposureTestResult>> ExposureDifferenceTest(
    const VideoRecord& video, const std::unordered_map<std::string, Group>& groups,
    const StanceMap& stances, const std::vector<int>& positions, Leaning leaning, double alpha) {
  if (leaning == Leaning::kNeutral) {
    return absl::InvalidArgumentError("exposure tests compare Left or Right leaning");
  }
  std::vector<ExposureTestResult> results;
  for (int k : positions) {
    AUDIT_ASSIGN_OR_RETURN(PositionalExposure exposure,
                           ComputePositionalExposure(video, groups, stances, k, leaning));
    if (exposure.left_accounts.empty() || exposure.right_accounts.empty()) {
      return absl::FailedPreconditionError(
          absl::StrCat("video \"", video.video_id, "\" lacks L or R accounts"));
    }
    AUDIT_ASSIGN_OR_RETURN(MannWhitneyResult mw,
                           MannWhitneyU(exposure.left_accounts, exposure.right_accounts));
    ExposureTestResult r;
    r.video_id = video.video_id;
    r.position = k;
    r.leaning = leaning;
    auto mean = [](const std::vector<double>& v) {
      return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    };
    r.mean_prop_left_accounts = mean(exposure.left_accounts);
    r.mean_prop_right_accounts = mean(exposure.right_accounts);
    r.difference = r.mean_prop_left_accounts - r.mean_prop_right_accounts;
    r.u = mw.u;
    r.p_two_sided = mw.p_two_sided;
    r.significant = mw.p_two_sided < alpha;
    results.push_back(r);
  }
  return results;
}

absl::Status ValidateComposition(const FypComposition& c) {
  for (double p : {c.prop_left, c.prop_right, c.prop_neutral, c.prop_nonpolitical}) {
    if (!(p >= 0.0 && p <= 1.0)) return absl::InvalidArgumentError("proportion outside [0, 1]");
  }
  const double sum = c.prop_left + c.prop_right + c.prop_neutral + c.prop_nonpolitical;
  if (std::fabs(sum - 1.0) > 1e-9) return absl::InvalidArgumentError("proportions do not sum to 1");
  return absl::OkStatus();
}

bool ValidateAccount(const FypComposition& c, Group target, double political_threshold) {
  const double political = c.prop_left + c.prop_right + c.prop_neutral;
  const double mine = target == Group::kLeft ? c.prop_left : c.prop_right;
  const double theirs = target == Group::kLeft ? c.prop_right : c.prop_left;
  return target != Group::kControl && political > political_threshold && mine > theirs;
}

std::string FeaturesCsv(const std::vector<VideoFeatures>& features) {
  std::string out = CsvRow({"video_id", "log_volume", "gini_likes", "gini_replies", "ipd"});
  for (const auto& f : features) {
    out += CsvRow({f.video_id, FormatSig9(f.log_volume), FormatSig9(f.gini_likes),
                   FormatSig9(f.gini_replies), f.ipd ? FormatSig9(*f.ipd) : ""});
  }
  return out;
}

std::string ExposureTestsCsv(const std::vector<ExposureTestResult>& results) {
  std::string out = CsvRow({"video_id", "k", "leaning", "diff", "u", "p", "significant"});
  for (const auto& r : results) {
    out += CsvRow({r.video_id, std::to_string(r.position), std::string(LeaningName(r.leaning)),
                   FormatSig9(r.difference), FormatSig9(r.u), FormatSig9(r.p_two_sided),
                   r.significant ? "true" : "false"});
  }
  return out;
}

}  // namespace audit
