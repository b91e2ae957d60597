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

#include "audit/stance.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "audit/group_stats.h"

namespace audit {

namespace internal {
std::string_view StancePromptTemplateV1();  // generated from assets/
}  // namespace internal

namespace {

constexpr std::string_view kDisplayNames[] = {"Pro-Democrat", "Anti-Democrat", "Pro-Republican",
                                              "Anti-Republican", "Neutral"};
constexpr std::string_view kNormalized[] = {"prodemocrat", "antidemocrat", "prorepublican",
                                            "antirepublican", "neutral"};

std::string Normalize(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (absl::ascii_isalnum(static_cast<unsigned char>(c))) {
      out += absl::ascii_tolower(static_cast<unsigned char>(c));
    }
  }
  return out;
}

struct LexiconEntry {
  Stance stance;
  std::vector<std::string_view> cues;
};

// Order is the tie-break priority.
const std::vector<LexiconEntry>& Lexicon() {
  static const auto* lexicon = new std::vector<LexiconEntry>{
      {Stance::kProRepublican,
       {"trump2024", "trump 2024", "maga", "vote red", "go trump", "vance 2024",
        "\xe2\x9d\xa4" /* red heart */, "\xf0\x9f\x90\x98" /* elephant */}},
      {Stance::kProDemocrat,
       {"harris2024", "kamala2024", "harris 2024", "vote blue", "madam president", "go kamala",
        "walz", "\xf0\x9f\x92\x99" /* blue heart */}},
      {Stance::kAntiRepublican,
       {"felon", "never trump", "nevertrump", "dump trump", "fascist", "project 2025"}},
      {Stance::kAntiDemocrat,
       {"commie", "kamunism", "bidenflation", "fire kamala", "sleepy joe", "dems ruined"}},
  };
  return *lexicon;
}

size_t CountOccurrences(std::string_view haystack, std::string_view needle) {
  size_t count = 0;
  for (size_t pos = haystack.find(needle); pos != std::string_view::npos;
       pos = haystack.find(needle, pos + needle.size())) {
    ++count;
  }
  return count;
}

}  // namespace

std::string_view StanceDisplayName(Stance stance) { return kDisplayNames[static_cast<int>(stance)]; }

std::string_view LeaningName(Leaning leaning) {
  switch (leaning) {
    case Leaning::kLeft:
      return "left";
    case Leaning::kRight:
      return "right";
    case Leaning::kNeutral:
      return "neutral";
  }
  return "neutral";
}

Leaning CollapseStance(Stance stance) {
  switch (stance) {
    case Stance::kProDemocrat:
    case Stance::kAntiRepublican:
      return Leaning::kLeft;
    case Stance::kProRepublican:
    case Stance::kAntiDemocrat:
      return Leaning::kRight;
    case Stance::kNeutral:
      return Leaning::kNeutral;
  }
  return Leaning::kNeutral;
}

std::optional<Stance> ParseStanceResponse(std::string_view response) {
  const std::string norm = Normalize(response);
  for (int i = 0; i < 5; ++i) {
    if (norm == kNormalized[i]) return static_cast<Stance>(i);
  }
  size_t best_pos = std::string::npos;
  std::optional<Stance> best;
  for (int i = 0; i < 5; ++i) {
    const size_t pos = norm.find(kNormalized[i]);
    if (pos < best_pos) {
      best_pos = pos;
      best = static_cast<Stance>(i);
    }
  }
  return best;
}

absl::StatusOr<Stance> ParseStanceLabel(std::string_view label) {
  if (auto code = ParseStanceCode(ToStd(absl::StripAsciiWhitespace(ToAbsl(label)))); code.ok()) return *code;
  const std::string norm = Normalize(label);
  constexpr std::string_view kShort[] = {"prodem", "antidem", "prorep", "antirep", "neutral"};
  for (int i = 0; i < 5; ++i) {
    if (norm == kNormalized[i] || norm == kShort[i]) return static_cast<Stance>(i);
  }
  return absl::InvalidArgumentError(absl::StrCat("unknown stance label \"", ToAbsl(label), "\""));
}

std::string_view StancePromptTemplate() { return internal::StancePromptTemplateV1(); }

absl::StatusOr<std::string> RenderPrompt(std::string_view comment_text,
                                         std::string_view video_description) {
  if (comment_text.empty()) return absl::InvalidArgumentError("empty comment");
  constexpr std::string_view kDescriptionSlot = "{video_description}";
  constexpr std::string_view kCommentSlot = "{comment}";
  const std::string_view tmpl = StancePromptTemplate();
  std::string out;
  out.reserve(tmpl.size() + comment_text.size() + video_description.size());
  size_t pos = 0;
  while (pos < tmpl.size()) {
    if (tmpl.compare(pos, kDescriptionSlot.size(), kDescriptionSlot) == 0) {
      out += video_description;
      pos += kDescriptionSlot.size();
    } else if (tmpl.compare(pos, kCommentSlot.size(), kCommentSlot) == 0) {
      out += comment_text;
      pos += kCommentSlot.size();
    } else {
      out += tmpl[pos++];
    }
  }
  return out;
}

Stance ClassifyStub(std::string_view comment_text, std::string_view /*video_description*/) {
  const std::string lowered = absl::AsciiStrToLower(ToAbsl(comment_text));
  Stance best = Stance::kNeutral;
  size_t best_hits = 0;
  for (const auto& entry : Lexicon()) {
    size_t hits = 0;
    for (std::string_view cue : entry.cues) hits += CountOccurrences(lowered, cue);
    if (hits > best_hits) {
      best_hits = hits;
      best = entry.stance;
    }
  }
  return best;
}

void StanceCounts::Add(Leaning leaning) {
  switch (leaning) {
    case Leaning::kLeft:
      ++n_left;
      break;
    case Leaning::kRight:
      ++n_right;
      break;
    case Leaning::kNeutral:
      ++n_neutral;
      break;
  }
}

std::vector<size_t> SampleWithoutReplacement(size_t population, size_t n, uint64_t seed) {
  std::vector<size_t> idx(population);
  std::iota(idx.begin(), idx.end(), 0);
  n = std::min(n, population);
  std::mt19937_64 rng(seed);
  for (size_t i = 0; i < n; ++i) {
    std::uniform_int_distribution<size_t> pick(i, population - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(n);
  return idx;
}

absl::StatusOr<SampleEstimate> SampleAndEstimate(const VideoRecord& video, int n, uint64_t seed,
                                                 const CommentClassifier& classifier) {
  if (video.comments.empty()) {
    return absl::InvalidArgumentError(absl::StrCat("video \"", video.video_id, "\" has no comments"));
  }
  if (n < 1) return absl::InvalidArgumentError("sample size must be >= 1");
  SampleEstimate est;
  const auto picks = SampleWithoutReplacement(video.comments.size(), static_cast<size_t>(n), seed);
  est.requested = static_cast<int>(picks.size());
  for (size_t i : picks) {
    const CommentRecord& c = video.comments[i];
    est.sampled_ids.push_back(c.comment_id);
    absl::StatusOr<Stance> label = classifier(c, video.description);
    if (!label.ok()) {
      est.failed_ids.push_back(c.comment_id);
      continue;
    }
    est.counts.Add(CollapseStance(*label));
    ++est.effective;
  }
  return est;
}

absl::StatusOr<AgreementReport> EvaluateClassifier(std::span<const Stance> predicted,
                                                   std::span<const Stance> gold) {
  if (predicted.size() != gold.size()) {
    return absl::InvalidArgumentError("prediction and gold lengths differ");
  }
  if (gold.empty()) return absl::InvalidArgumentError("no labels to evaluate");
  AgreementReport report;
  report.n = static_cast<int64_t>(gold.size());
  std::vector<std::string> a, b;
  int64_t trace = 0;
  for (size_t i = 0; i < gold.size(); ++i) {
    ++report.confusion[static_cast<size_t>(gold[i])][static_cast<size_t>(predicted[i])];
    if (gold[i] == predicted[i]) ++trace;
    a.emplace_back(StanceCode(gold[i]));
    b.emplace_back(StanceCode(predicted[i]));
  }
  report.accuracy = static_cast<double>(trace) / static_cast<double>(report.n);
  absl::StatusOr<double> kappa = CohensKappa(a, b);
  // Undefined when both sides are one identical constant label.
  report.kappa = kappa.ok() ? *kappa : std::numeric_limits<double>::quiet_NaN();
  return report;
}

}  // namespace audit
