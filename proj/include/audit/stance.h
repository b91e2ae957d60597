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

#ifndef AUDIT_STANCE_H_
#define AUDIT_STANCE_H_

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "audit/common.h"
#include "audit/data_model.h"

namespace audit {

inline constexpr std::array<Stance, 5> kAllStances = {
    Stance::kProDemocrat, Stance::kAntiDemocrat, Stance::kProRepublican, Stance::kAntiRepublican,
    Stance::kNeutral};

// "Pro-Democrat", "Anti-Democrat", "Pro-Republican", "Anti-Republican",
// "Neutral".
std::string_view StanceDisplayName(Stance stance);
std::string_view LeaningName(Leaning leaning);  // "left" / "right" / "neutral"

// ProDemocrat and AntiRepublican are Left; ProRepublican and AntiDemocrat
// are Right.
Leaning CollapseStance(Stance stance);

// Strict match of a normalized response (lowercased, punctuation and
// whitespace stripped) against the five labels, then a substring fallback
// choosing the earliest label mentioned. nullopt means unlabeled.
std::optional<Stance> ParseStanceResponse(std::string_view response);

// Accepts display names ("Pro-Democrat"), file codes ("pro_dem") and the
// normalized forms of either.
absl::StatusOr<Stance> ParseStanceLabel(std::string_view label);

// The embedded classifier prompt, byte-exact.
std::string_view StancePromptTemplate();

// Substitutes {video_description} and {comment} in one pass; substituted
// text is never re-scanned for slots.
absl::StatusOr<std::string> RenderPrompt(std::string_view comment_text,
                                         std::string_view video_description);

// Offline keyword/emoji lexicon classifier. Deterministic, for tests and
// dry runs only; it is not a research-grade stance model.
Stance ClassifyStub(std::string_view comment_text, std::string_view video_description);

struct StanceCounts {
  int64_t n_left = 0;
  int64_t n_right = 0;
  int64_t n_neutral = 0;

  int64_t total() const { return n_left + n_right + n_neutral; }
  void Add(Leaning leaning);

  friend bool operator==(const StanceCounts&, const StanceCounts&) = default;
};

using CommentClassifier =
    std::function<absl::StatusOr<Stance>(const CommentRecord& comment, std::string_view description)>;

struct SampleEstimate {
  StanceCounts counts;
  int requested = 0;  // min(n, comment count)
  int effective = 0;  // successfully classified
  std::vector<std::string> sampled_ids;
  std::vector<std::string> failed_ids;
};

// Uniform sample of min(n, |comments|) comments without replacement,
// deterministic in `seed`, each classified and collapsed.
absl::StatusOr<SampleEstimate> SampleAndEstimate(const VideoRecord& video, int n, uint64_t seed,
                                                 const CommentClassifier& classifier);

// Indices of a uniform sample of min(n, population) items without
// replacement, in draw order.
std::vector<size_t> SampleWithoutReplacement(size_t population, size_t n, uint64_t seed);

struct AgreementReport {
  double accuracy = 0.0;
  double kappa = 0.0;
  std::array<std::array<int64_t, 5>, 5> confusion{};  // [gold][predicted]
  int64_t n = 0;
};

absl::StatusOr<AgreementReport> EvaluateClassifier(std::span<const Stance> predicted,
                                                   std::span<const Stance> gold);

}  // namespace audit

#endif  // AUDIT_STANCE_H_
