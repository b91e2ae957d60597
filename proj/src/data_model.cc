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

#include "audit/data_model.h"

#include <algorithm>
#include <sstream>
#include <unordered_set>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "audit/text_io.h"
#include "json.hpp"

namespace audit {

namespace {

using json = nlohmann::ordered_json;

constexpr std::string_view kStanceCodes[] = {"pro_dem", "anti_dem", "pro_rep", "anti_rep",
                                             "neutral"};

absl::Status LineError(const std::filesystem::path& file, int line, std::string_view what) {
  return absl::InvalidArgumentError(
      absl::StrCat(file.filename().string(), ":", line, ": ", ToAbsl(what)));
}

absl::StatusOr<std::string> RequireString(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) return absl::InvalidArgumentError(absl::StrCat("missing field \"", key, "\""));
  if (!it->is_string()) {
    return absl::InvalidArgumentError(absl::StrCat("field \"", key, "\" must be a string"));
  }
  return it->get<std::string>();
}

absl::StatusOr<int64_t> RequireCount(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) return absl::InvalidArgumentError(absl::StrCat("missing field \"", key, "\""));
  if (!it->is_number_integer()) {
    return absl::InvalidArgumentError(absl::StrCat("field \"", key, "\" must be an integer"));
  }
  int64_t v = it->get<int64_t>();
  if (v < 0) return absl::InvalidArgumentError(absl::StrCat("field \"", key, "\" is negative"));
  return v;
}

// Calls fn(line_number, parsed_object) for each non-blank line.
template <typename Fn>
absl::Status ForEachJsonLine(const std::filesystem::path& path, Fn fn) {
  AUDIT_ASSIGN_OR_RETURN(std::string text, ReadFileToString(path));
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (absl::StripAsciiWhitespace(line).empty()) continue;
    json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (obj.is_discarded() || !obj.is_object()) {
      return LineError(path, line_no, "malformed JSON record");
    }
    absl::Status s = fn(line_no, obj);
    if (!s.ok()) return LineError(path, line_no, ToStd(s.message()));
  }
  return absl::OkStatus();
}

}  // namespace

std::string_view GroupCode(Group group) {
  switch (group) {
    case Group::kLeft:
      return "left";
    case Group::kRight:
      return "right";
    case Group::kControl:
      return "control";
  }
  return "control";
}

absl::StatusOr<Group> ParseGroupCode(std::string_view code) {
  if (code == "left") return Group::kLeft;
  if (code == "right") return Group::kRight;
  if (code == "control") return Group::kControl;
  return absl::InvalidArgumentError(absl::StrCat("unknown group \"", ToAbsl(code), "\""));
}

std::string_view StanceCode(Stance stance) { return kStanceCodes[static_cast<int>(stance)]; }

absl::StatusOr<Stance> ParseStanceCode(std::string_view code) {
  for (int i = 0; i < 5; ++i) {
    if (code == kStanceCodes[i]) return static_cast<Stance>(i);
  }
  return absl::InvalidArgumentError(absl::StrCat("unknown stance \"", ToAbsl(code), "\""));
}

const CommentRecord* VideoRecord::FindComment(std::string_view comment_id) const {
  for (const auto& c : comments) {
    if (c.comment_id == comment_id) return &c;
  }
  return nullptr;
}

const AuditAccount* AuditDataset::FindAccount(std::string_view account_id) const {
  for (const auto& a : accounts) {
    if (a.account_id == account_id) return &a;
  }
  return nullptr;
}

std::unordered_map<std::string, Group> AuditDataset::GroupIndex() const {
  std::unordered_map<std::string, Group> out;
  for (const auto& a : accounts) out.emplace(a.account_id, a.group);
  return out;
}

absl::Status ValidateDataset(const AuditDataset& dataset) {
  if (dataset.accounts.empty()) return absl::InvalidArgumentError("no accounts");
  std::unordered_set<std::string> account_ids;
  for (const auto& a : dataset.accounts) {
    if (a.account_id.empty()) return absl::InvalidArgumentError("empty account_id");
    if (!account_ids.insert(a.account_id).second) {
      return absl::InvalidArgumentError(absl::StrCat("duplicate account_id \"", a.account_id, "\""));
    }
  }
  std::unordered_set<std::string> video_ids;
  for (const auto& v : dataset.videos) {
    if (v.video_id.empty()) return absl::InvalidArgumentError("empty video_id");
    if (!video_ids.insert(v.video_id).second) {
      return absl::InvalidArgumentError(absl::StrCat("duplicate video_id \"", v.video_id, "\""));
    }
    std::unordered_set<std::string_view> comment_ids;
    for (const auto& c : v.comments) {
      if (c.comment_id.empty()) return absl::InvalidArgumentError("empty comment_id");
      if (c.video_id != v.video_id) {
        return absl::InvalidArgumentError(
            absl::StrCat("comment \"", c.comment_id, "\" filed under wrong video"));
      }
      if (!comment_ids.insert(c.comment_id).second) {
        return absl::InvalidArgumentError(absl::StrCat("duplicate comment_id \"", c.comment_id,
                                                       "\" in video \"", v.video_id, "\""));
      }
      if (c.like_count < 0 || c.reply_count < 0) {
        return absl::InvalidArgumentError(
            absl::StrCat("negative count on comment \"", c.comment_id, "\""));
      }
    }
    std::unordered_set<std::string_view> exposed_accounts;
    for (const auto& e : v.exposures) {
      if (e.video_id != v.video_id) {
        return absl::InvalidArgumentError("exposure filed under wrong video");
      }
      if (!account_ids.contains(e.account_id)) {
        return absl::InvalidArgumentError(absl::StrCat("exposure references unknown account_id \"",
                                                       e.account_id, "\""));
      }
      if (!exposed_accounts.insert(e.account_id).second) {
        return absl::InvalidArgumentError(absl::StrCat("duplicate exposure for account \"",
                                                       e.account_id, "\" on video \"",
                                                       v.video_id, "\""));
      }
      if (e.items.empty()) {
        return absl::InvalidArgumentError(absl::StrCat("empty exposure for account \"",
                                                       e.account_id, "\" on video \"",
                                                       v.video_id, "\""));
      }
      std::unordered_set<std::string_view> seen;
      for (const auto& item : e.items) {
        if (!comment_ids.contains(item)) {
          return absl::InvalidArgumentError(absl::StrCat("exposure references unknown comment_id \"",
                                                         item, "\" on video \"", v.video_id, "\""));
        }
        if (!seen.insert(item).second) {
          return absl::InvalidArgumentError(absl::StrCat("duplicate comment_id \"", item,
                                                         "\" within exposure of account \"",
                                                         e.account_id, "\""));
        }
      }
    }
  }
  return absl::OkStatus();
}

RankedExposure TruncateTopK(const RankedExposure& exposure, int k) {
  RankedExposure out{exposure.video_id, exposure.account_id, {}};
  size_t n = std::min(exposure.items.size(), static_cast<size_t>(std::max(k, 0)));
  out.items.assign(exposure.items.begin(), exposure.items.begin() + static_cast<long>(n));
  return out;
}

absl::StatusOr<BundlePaths> ReadManifest(const std::filesystem::path& manifest) {
  AUDIT_ASSIGN_OR_RETURN(std::string text, ReadFileToString(manifest));
  AUDIT_ASSIGN_OR_RETURN(auto kv, ParseKeyValue(text));
  const auto base = manifest.parent_path();
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
  };
  BundlePaths paths;
  for (const char* key : {"accounts", "comments", "exposures"}) {
    if (!kv.contains(key)) {
      return absl::InvalidArgumentError(absl::StrCat("manifest missing \"", key, "\""));
    }
  }
  paths.accounts = resolve(kv["accounts"]);
  paths.comments = resolve(kv["comments"]);
  paths.exposures = resolve(kv["exposures"]);
  if (kv.contains("videos")) paths.videos = resolve(kv["videos"]);
  return paths;
}

absl::StatusOr<AuditDataset> LoadDataset(const std::filesystem::path& manifest) {
  AUDIT_ASSIGN_OR_RETURN(BundlePaths paths, ReadManifest(manifest));
  AuditDataset dataset;
  std::unordered_map<std::string, size_t> video_index;
  auto video_for = [&](const std::string& id) -> VideoRecord& {
    auto [it, inserted] = video_index.emplace(id, dataset.videos.size());
    if (inserted) {
      dataset.videos.emplace_back();
      dataset.videos.back().video_id = id;
    }
    return dataset.videos[it->second];
  };

  AUDIT_RETURN_IF_ERROR(ForEachJsonLine(paths.accounts, [&](int, const json& obj) -> absl::Status {
    AuditAccount a;
    AUDIT_ASSIGN_OR_RETURN(a.account_id, RequireString(obj, "account_id"));
    AUDIT_ASSIGN_OR_RETURN(std::string group, RequireString(obj, "group"));
    AUDIT_ASSIGN_OR_RETURN(a.group, ParseGroupCode(group));
    dataset.accounts.push_back(std::move(a));
    return absl::OkStatus();
  }));
  if (dataset.accounts.empty()) return absl::InvalidArgumentError("no accounts");

  if (paths.videos) {
    AUDIT_RETURN_IF_ERROR(ForEachJsonLine(*paths.videos, [&](int, const json& obj) -> absl::Status {
      AUDIT_ASSIGN_OR_RETURN(std::string id, RequireString(obj, "video_id"));
      if (video_index.contains(id)) {
        return absl::InvalidArgumentError(absl::StrCat("duplicate video_id \"", id, "\""));
      }
      VideoRecord& v = video_for(id);
      if (obj.contains("description")) {
        AUDIT_ASSIGN_OR_RETURN(v.description, RequireString(obj, "description"));
      }
      if (obj.contains("channel_id")) {
        AUDIT_ASSIGN_OR_RETURN(v.channel_id, RequireString(obj, "channel_id"));
      }
      return absl::OkStatus();
    }));
  }

  AUDIT_RETURN_IF_ERROR(ForEachJsonLine(paths.comments, [&](int, const json& obj) -> absl::Status {
    CommentRecord c;
    AUDIT_ASSIGN_OR_RETURN(c.comment_id, RequireString(obj, "comment_id"));
    AUDIT_ASSIGN_OR_RETURN(c.video_id, RequireString(obj, "video_id"));
    if (obj.contains("text") && !obj["text"].is_null()) {
      AUDIT_ASSIGN_OR_RETURN(c.text, RequireString(obj, "text"));
    }
    AUDIT_ASSIGN_OR_RETURN(c.like_count, RequireCount(obj, "like_count"));
    AUDIT_ASSIGN_OR_RETURN(c.reply_count, RequireCount(obj, "reply_count"));
    if (obj.contains("stance") && !obj["stance"].is_null()) {
      AUDIT_ASSIGN_OR_RETURN(std::string code, RequireString(obj, "stance"));
      AUDIT_ASSIGN_OR_RETURN(c.stance, ParseStanceCode(code));
    }
    VideoRecord& v = video_for(c.video_id);
    v.comments.push_back(std::move(c));
    return absl::OkStatus();
  }));

  AUDIT_RETURN_IF_ERROR(ForEachJsonLine(paths.exposures, [&](int, const json& obj) -> absl::Status {
    RankedExposure e;
    AUDIT_ASSIGN_OR_RETURN(e.video_id, RequireString(obj, "video_id"));
    AUDIT_ASSIGN_OR_RETURN(e.account_id, RequireString(obj, "account_id"));
    auto it = obj.find("items");
    if (it == obj.end() || !it->is_array()) {
      return absl::InvalidArgumentError("field \"items\" must be an array");
    }
    for (const auto& item : *it) {
      if (!item.is_string()) return absl::InvalidArgumentError("items must be strings");
      e.items.push_back(item.get<std::string>());
    }
    VideoRecord& v = video_for(e.video_id);
    v.exposures.push_back(std::move(e));
    return absl::OkStatus();
  }));

  AUDIT_RETURN_IF_ERROR(ValidateDataset(dataset));
  return dataset;
}

absl::StatusOr<std::filesystem::path> SaveDataset(const AuditDataset& dataset,
                                                  const std::filesystem::path& dir) {
  AUDIT_RETURN_IF_ERROR(ValidateDataset(dataset));
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) return absl::PermissionDeniedError(absl::StrCat("cannot create ", dir.string()));

  std::string accounts, videos, comments, exposures;
  for (const auto& a : dataset.accounts) {
    json obj{{"account_id", a.account_id}, {"group", std::string(GroupCode(a.group))}};
    accounts += obj.dump() + "\n";
  }
  for (const auto& v : dataset.videos) {
    json vobj{{"video_id", v.video_id}, {"description", v.description}, {"channel_id", v.channel_id}};
    videos += vobj.dump() + "\n";
    for (const auto& c : v.comments) {
      json obj{{"comment_id", c.comment_id},
               {"video_id", c.video_id},
               {"text", c.text},
               {"like_count", c.like_count},
               {"reply_count", c.reply_count}};
      if (c.stance) obj["stance"] = std::string(StanceCode(*c.stance));
      comments += obj.dump() + "\n";
    }
    for (const auto& e : v.exposures) {
      json obj{{"video_id", e.video_id}, {"account_id", e.account_id}, {"items", e.items}};
      exposures += obj.dump() + "\n";
    }
  }
  AUDIT_RETURN_IF_ERROR(WriteStringToFile(dir / "accounts.jsonl", accounts));
  AUDIT_RETURN_IF_ERROR(WriteStringToFile(dir / "videos.jsonl", videos));
  AUDIT_RETURN_IF_ERROR(WriteStringToFile(dir / "comments.jsonl", comments));
  AUDIT_RETURN_IF_ERROR(WriteStringToFile(dir / "exposures.jsonl", exposures));
  const auto manifest = dir / "manifest.txt";
  AUDIT_RETURN_IF_ERROR(WriteStringToFile(manifest,
                                          "accounts = accounts.jsonl\n"
                                          "videos = videos.jsonl\n"
                                          "comments = comments.jsonl\n"
                                          "exposures = exposures.jsonl\n"));
  return manifest;
}

}  // namespace audit
