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

#ifndef AUDIT_DATA_MODEL_H_
#define AUDIT_DATA_MODEL_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "audit/common.h"

namespace audit {

enum class Group { kLeft, kRight, kControl };

// Five-way codebook label attached to a comment.
enum class Stance { kProDemocrat, kAntiDemocrat, kProRepublican, kAntiRepublican, kNeutral };

// Three-way collapse of Stance.
enum class Leaning { kLeft, kRight, kNeutral };

std::string_view GroupCode(Group group);  // "left" / "right" / "control"
absl::StatusOr<Group> ParseGroupCode(std::string_view code);

std::string_view StanceCode(Stance stance);  // "pro_dem", ...
absl::StatusOr<Stance> ParseStanceCode(std::string_view code);

struct AuditAccount {
  std::string account_id;
  Group group = Group::kControl;

  friend bool operator==(const AuditAccount&, const AuditAccount&) = default;
};

struct CommentRecord {
  std::string comment_id;
  std::string video_id;
  std::string text;
  int64_t like_count = 0;
  int64_t reply_count = 0;
  std::optional<Stance> stance;

  friend bool operator==(const CommentRecord&, const CommentRecord&) = default;
};

// The ordered comment list one account saw on one video. The item set is
// the list's set view; items are duplicate-free.
struct RankedExposure {
  std::string video_id;
  std::string account_id;
  std::vector<std::string> items;

  friend bool operator==(const RankedExposure&, const RankedExposure&) = default;
};

struct VideoRecord {
  std::string video_id;
  std::string description;
  std::string channel_id;
  std::vector<CommentRecord> comments;
  std::vector<RankedExposure> exposures;

  const CommentRecord* FindComment(std::string_view comment_id) const;

  friend bool operator==(const VideoRecord&, const VideoRecord&) = default;
};

struct AuditDataset {
  std::vector<AuditAccount> accounts;
  std::vector<VideoRecord> videos;

  const AuditAccount* FindAccount(std::string_view account_id) const;
  std::unordered_map<std::string, Group> GroupIndex() const;

  friend bool operator==(const AuditDataset&, const AuditDataset&) = default;
};

// Checks every dataset invariant: unique non-empty account ids, unique
// comment ids per video, non-negative counts, duplicate-free non-empty
// exposures whose items and accounts resolve.
absl::Status ValidateDataset(const AuditDataset& dataset);

// First min(k, |items|) items in their original order.
RankedExposure TruncateTopK(const RankedExposure& exposure, int k);

// Paths of the JSONL bundle named by a manifest.
struct BundlePaths {
  std::filesystem::path accounts;
  std::filesystem::path comments;
  std::filesystem::path exposures;
  std::optional<std::filesystem::path> videos;
};

absl::StatusOr<BundlePaths> ReadManifest(const std::filesystem::path& manifest);

// Loads and eagerly validates the bundle referenced by `manifest`.
absl::StatusOr<AuditDataset> LoadDataset(const std::filesystem::path& manifest);

// Writes manifest.txt, accounts.jsonl, comments.jsonl, exposures.jsonl and
// videos.jsonl into `dir`. Returns the manifest path.
absl::StatusOr<std::filesystem::path> SaveDataset(const AuditDataset& dataset,
                                                  const std::filesystem::path& dir);

}  // namespace audit

#endif  // AUDIT_DATA_MODEL_H_
