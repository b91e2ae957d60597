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

#include "audit/simulator.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "audit/stance.h"
#include "audit/text_io.h"
#include "json.hpp"

namespace audit {

namespace {

// Stream purposes for DeriveSeed(seed, video, account, purpose).
enum Purpose : uint64_t {
  kParamsStream = 1,
  kStanceStream = 2,
  kLikesStream = 3,
  kRepliesStream = 4,
  kJitterStream = 5,
  kNoiseStream = 6,
};

constexpr uint64_t kNoAccount = ~0ULL;

constexpr std::string_view kTexts[5][3] = {
    {"harris2024 all the way", "vote blue this november", "madam president has a nice ring"},
    {"bidenflation is killing us", "sleepy joe had his turn", "kamunism is not the answer"},
    {"trump2024 lets go", "maga all the way", "vote red in november"},
    {"never trump, not again", "project 2025 is terrifying", "a convicted felon should not run"},
    {"interesting video", "who else is watching this", "thanks for the update"},
};

// Prefix sums over mutable weights for O(log n) proportional draws.
class Fenwick {
 public:
  explicit Fenwick(size_t n) : tree_(n + 1, 0.0) {}

  void Add(size_t i, double delta) {
    for (size_t x = i + 1; x < tree_.size(); x += x & (~x + 1)) tree_[x] += delta;
  }

  // Smallest index whose inclusive prefix sum exceeds `target`.
  size_t Find(double target) const {
    const size_t n = tree_.size() - 1;
    size_t pos = 0;
    size_t step = 1;
    while (step * 2 <= n) step *= 2;
    for (; step > 0; step /= 2) {
      if (pos + step <= n && tree_[pos + step] <= target) {
        pos += step;
        target -= tree_[pos];
      }
    }
    return std::min(pos, n - 1);
  }

 private:
  std::vector<double> tree_;
};

// Hands out `total` units one at a time with probability proportional to
// (count + 1)^alpha.
std::vector<int64_t> PreferentialAttachment(size_t n, int64_t total, double alpha, uint64_t seed) {
  std::vector<int64_t> counts(n, 0);
  std::vector<double> weight(n, 1.0);
  Fenwick tree(n);
  double sum = 0.0;
  for (size_t i = 0; i < n; ++i) {
    tree.Add(i, 1.0);
    sum += 1.0;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int64_t t = 0; t < total; ++t) {
    const size_t i = tree.Find(unit(rng) * sum);
    ++counts[i];
    const double w = std::pow(static_cast<double>(counts[i] + 1), alpha);
    tree.Add(i, w - weight[i]);
    sum += w - weight[i];
    weight[i] = w;
  }
  return counts;
}

bool InUnit(double x) { return x >= 0.0 && x <= 1.0; }

std::string FormatDouble(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string_view SweepName(SweepMode mode) {
  switch (mode) {
    case SweepMode::kNone:
      return "none";
    case SweepMode::kImbalance:
      return "imbalance";
    case SweepMode::kVolume:
      return "volume";
  }
  return "none";
}

}  // namespace

absl::Status ValidateSimConfig(const SimConfig& c) {
  if (c.n_videos < 1) return absl::InvalidArgumentError("n_videos must be >= 1");
  if (c.n_left < 0 || c.n_right < 0 || c.n_control < 0) {
    return absl::InvalidArgumentError("account counts must be >= 0");
  }
  if (c.n_left + c.n_right + c.n_control < 2) {
    return absl::InvalidArgumentError("at least 2 accounts are required");
  }
  if (c.n_left > 99 || c.n_right > 99 || c.n_control > 99) {
    return absl::InvalidArgumentError("at most 99 accounts per group");
  }
  if (c.k < 1) return absl::InvalidArgumentError("k must be >= 1");
  if (c.comments_per_video < c.k) {
    return absl::InvalidArgumentError("comments_per_video must be >= k");
  }
  if (!InUnit(c.p_left) || !InUnit(c.p_right) || !InUnit(c.p_neutral) ||
      std::fabs(c.p_left + c.p_right + c.p_neutral - 1.0) > 1e-9) {
    return absl::InvalidArgumentError("invalid stance mixture: probabilities must sum to 1");
  }
  if (!(c.alpha >= 0.0)) return absl::InvalidArgumentError("alpha must be >= 0");
  if (!InUnit(c.lambda)) return absl::InvalidArgumentError("lambda must lie in [0, 1]");
  if (!(c.epsilon >= 0.0)) return absl::InvalidArgumentError("epsilon must be >= 0");
  if (!(c.likes_per_comment >= 0.0) || !(c.replies_per_comment >= 0.0)) {
    return absl::InvalidArgumentError("engagement rates must be >= 0");
  }
  if (!InUnit(c.composition_jitter)) {
    return absl::InvalidArgumentError("composition_jitter must lie in [0, 1]");
  }
  if (!InUnit(c.imbalance_max)) return absl::InvalidArgumentError("imbalance_max must lie in [0, 1]");
  if (c.sweep == SweepMode::kVolume && (c.volume_min < c.k || c.volume_max < c.volume_min)) {
    return absl::InvalidArgumentError("volume range must satisfy k <= volume_min <= volume_max");
  }
  return absl::OkStatus();
}

absl::StatusOr<SimConfig> ParseSimConfig(std::string_view text) {
  AUDIT_ASSIGN_OR_RETURN(auto kv, ParseKeyValue(text));
  SimConfig c;
  for (const auto& [key, value] : kv) {
    bool ok = true;
    auto as_int = [&](int* out) { ok = absl::SimpleAtoi(value, out); };
    auto as_double = [&](double* out) { ok = absl::SimpleAtod(value, out) && std::isfinite(*out); };
    if (key == "n_videos") {
      as_int(&c.n_videos);
    } else if (key == "n_left") {
      as_int(&c.n_left);
    } else if (key == "n_right") {
      as_int(&c.n_right);
    } else if (key == "n_control") {
      as_int(&c.n_control);
    } else if (key == "comments_per_video") {
      as_int(&c.comments_per_video);
    } else if (key == "p_left") {
      as_double(&c.p_left);
    } else if (key == "p_right") {
      as_double(&c.p_right);
    } else if (key == "p_neutral") {
      as_double(&c.p_neutral);
    } else if (key == "alpha") {
      as_double(&c.alpha);
    } else if (key == "likes_per_comment") {
      as_double(&c.likes_per_comment);
    } else if (key == "replies_per_comment") {
      as_double(&c.replies_per_comment);
    } else if (key == "lambda") {
      as_double(&c.lambda);
    } else if (key == "epsilon") {
      as_double(&c.epsilon);
    } else if (key == "k") {
      as_int(&c.k);
    } else if (key == "seed") {
      ok = absl::SimpleAtoi(value, &c.seed);
    } else if (key == "composition_jitter") {
      as_double(&c.composition_jitter);
    } else if (key == "imbalance_max") {
      as_double(&c.imbalance_max);
    } else if (key == "volume_min") {
      as_int(&c.volume_min);
    } else if (key == "volume_max") {
      as_int(&c.volume_max);
    } else if (key == "sweep") {
      if (value == "none") {
        c.sweep = SweepMode::kNone;
      } else if (value == "imbalance") {
        c.sweep = SweepMode::kImbalance;
      } else if (value == "volume") {
        c.sweep = SweepMode::kVolume;
      } else {
        ok = false;
      }
    } else {
      return absl::InvalidArgumentError(absl::StrCat("unknown config key \"", key, "\""));
    }
    if (!ok) {
      return absl::InvalidArgumentError(absl::StrCat("bad value for \"", key, "\": \"", value, "\""));
    }
  }
  AUDIT_RETURN_IF_ERROR(ValidateSimConfig(c));
  return c;
}

std::string SimConfigToText(const SimConfig& c) {
  std::string out;
  auto put = [&out](std::string_view key, const std::string& value) {
    absl::StrAppend(&out, ToAbsl(key), " = ", value, "\n");
  };
  put("n_videos", std::to_string(c.n_videos));
  put("n_left", std::to_string(c.n_left));
  put("n_right", std::to_string(c.n_right));
  put("n_control", std::to_string(c.n_control));
  put("comments_per_video", std::to_string(c.comments_per_video));
  put("p_left", FormatDouble(c.p_left));
  put("p_right", FormatDouble(c.p_right));
  put("p_neutral", FormatDouble(c.p_neutral));
  put("alpha", FormatDouble(c.alpha));
  put("likes_per_comment", FormatDouble(c.likes_per_comment));
  put("replies_per_comment", FormatDouble(c.replies_per_comment));
  put("lambda", FormatDouble(c.lambda));
  put("epsilon", FormatDouble(c.epsilon));
  put("k", std::to_string(c.k));
  put("seed", std::to_string(c.seed));
  put("composition_jitter", FormatDouble(c.composition_jitter));
  put("sweep", std::string(SweepName(c.sweep)));
  put("imbalance_max", FormatDouble(c.imbalance_max));
  put("volume_min", std::to_string(c.volume_min));
  put("volume_max", std::to_string(c.volume_max));
  return out;
}

VideoParams ResolveVideoParams(const SimConfig& c, int video_index) {
  VideoParams p{c.comments_per_video, c.p_left, c.p_right, c.p_neutral, c.alpha, c.lambda};
  if (c.sweep == SweepMode::kNone) return p;
  std::mt19937_64 rng(DeriveSeed(c.seed, video_index, kNoAccount, kParamsStream));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng);
  if (c.sweep == SweepMode::kImbalance) {
    const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
    const double d = u * c.imbalance_max;
    const double partisan = c.p_left + c.p_right;
    p.p_left = partisan * (1.0 + sign * d) / 2.0;
    p.p_right = partisan * (1.0 - sign * d) / 2.0;
    p.lambda = c.lambda * u;
  } else {
    const double lo = std::log(static_cast<double>(c.volume_min));
    const double hi = std::log(static_cast<double>(c.volume_max));
    p.n_comments = std::clamp(static_cast<int>(std::lround(std::exp(lo + u * (hi - lo)))),
                              c.volume_min, c.volume_max);
    p.alpha = c.alpha * u;
    p.lambda = c.lambda * u;
  }
  return p;
}

std::string SimVideoId(int video_index) {
  return absl::StrFormat("v%04d", video_index + 1);
}

absl::StatusOr<std::vector<CommentRecord>> GenerateCommentPool(const SimConfig& config,
                                                               int video_index) {
  AUDIT_RETURN_IF_ERROR(ValidateSimConfig(config));
  const VideoParams params = ResolveVideoParams(config, video_index);
  const size_t n = static_cast<size_t>(params.n_comments);
  const std::string video_id = SimVideoId(video_index);

  std::mt19937_64 stance_rng(DeriveSeed(config.seed, video_index, kNoAccount, kStanceStream));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, 2);
  std::vector<CommentRecord> pool(n);
  for (size_t i = 0; i < n; ++i) {
    const double u = unit(stance_rng);
    const bool side = unit(stance_rng) < 0.5;
    Stance s = Stance::kNeutral;
    if (u < params.p_left) {
      s = side ? Stance::kProDemocrat : Stance::kAntiRepublican;
    } else if (u < params.p_left + params.p_right) {
      s = side ? Stance::kProRepublican : Stance::kAntiDemocrat;
    }
    pool[i].comment_id = absl::StrFormat("%s-c%04d", video_id, i + 1);
    pool[i].video_id = video_id;
    pool[i].text = std::string(kTexts[static_cast<int>(s)][pick(stance_rng)]);
    pool[i].stance = s;
  }
  const auto likes = PreferentialAttachment(
      n, std::llround(config.likes_per_comment * static_cast<double>(n)), params.alpha,
      DeriveSeed(config.seed, video_index, kNoAccount, kLikesStream));
  const auto replies = PreferentialAttachment(
      n, std::llround(config.replies_per_comment * static_cast<double>(n)), params.alpha,
      DeriveSeed(config.seed, video_index, kNoAccount, kRepliesStream));
  for (size_t i = 0; i < n; ++i) {
    pool[i].like_count = likes[i];
    pool[i].reply_count = replies[i];
  }
  return pool;
}

std::vector<AuditAccount> SimAccounts(const SimConfig& config) {
  std::vector<AuditAccount> out;
  auto add = [&out](char prefix, int count, Group group) {
    for (int i = 1; i <= count; ++i) {
      out.push_back({absl::StrFormat("%c%02d", prefix, i), group});
    }
  };
  add('L', config.n_left, Group::kLeft);
  add('R', config.n_right, Group::kRight);
  add('C', config.n_control, Group::kControl);
  return out;
}

absl::StatusOr<std::vector<RankedExposure>> GenerateRankings(
    const std::vector<CommentRecord>& pool, const std::vector<AuditAccount>& accounts,
    const SimConfig& config, int video_index, double lambda) {
  const size_t k = static_cast<size_t>(config.k);
  if (pool.size() < k) return absl::InvalidArgumentError("pool smaller than k");
  for (const auto& c : pool) {
    if (!c.stance) return absl::InvalidArgumentError("pool comment without stance");
  }

  std::vector<size_t> by_likes(pool.size());
  std::iota(by_likes.begin(), by_likes.end(), 0);
  std::stable_sort(by_likes.begin(), by_likes.end(),
                   [&](size_t a, size_t b) { return pool[a].like_count > pool[b].like_count; });
  const auto [lo, hi] = std::minmax_element(pool.begin(), pool.end(), [](const auto& a, const auto& b) {
    return a.like_count < b.like_count;
  });
  const double range = static_cast<double>(hi->like_count - lo->like_count);
  auto pop = [&](size_t i) {
    return range > 0 ? static_cast<double>(pool[i].like_count - lo->like_count) / range : 0.0;
  };

  std::vector<RankedExposure> out;
  for (size_t a = 0; a < accounts.size(); ++a) {
    const Group group = accounts[a].group;
    std::vector<size_t> visible(by_likes.begin(), by_likes.begin() + static_cast<long>(k));
    std::mt19937_64 jitter_rng(DeriveSeed(config.seed, video_index, a, kJitterStream));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (pool.size() > k && unit(jitter_rng) < config.composition_jitter) visible[k - 1] = by_likes[k];

    std::mt19937_64 noise_rng(DeriveSeed(config.seed, video_index, a, kNoiseStream));
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<std::pair<double, size_t>> scored;
    for (size_t i : visible) {
      double affinity = 0.5;
      const Leaning leaning = CollapseStance(*pool[i].stance);
      if (group != Group::kControl && leaning != Leaning::kNeutral) {
        const Leaning own = group == Group::kLeft ? Leaning::kLeft : Leaning::kRight;
        affinity = leaning == own ? 1.0 : 0.0;
      }
      const double s = (1.0 - lambda) * pop(i) + lambda * affinity + config.epsilon * noise(noise_rng);
      scored.push_back({s, i});
    }
    std::stable_sort(scored.begin(), scored.end(), [](const auto& x, const auto& y) {
      return x.first > y.first || (x.first == y.first && x.second < y.second);
    });
    RankedExposure e;
    e.video_id = pool.front().video_id;
    e.account_id = accounts[a].account_id;
    for (const auto& [s, i] : scored) e.items.push_back(pool[i].comment_id);
    out.push_back(std::move(e));
  }
  return out;
}

absl::StatusOr<SimOutput> RunSyntheticAudit(const SimConfig& config, Execution exec) {
  AUDIT_RETURN_IF_ERROR(ValidateSimConfig(config));
  const std::vector<AuditAccount> accounts = SimAccounts(config);
  const int n = config.n_videos;
  std::vector<VideoRecord> videos(static_cast<size_t>(n));
  std::vector<VideoParams> params(static_cast<size_t>(n));
  std::vector<absl::Status> status(static_cast<size_t>(n));

  auto build = [&](int v) {
    const size_t idx = static_cast<size_t>(v);
    params[idx] = ResolveVideoParams(config, v);
    VideoRecord& video = videos[idx];
    video.video_id = SimVideoId(v);
    video.description = absl::StrCat("Synthetic video ", v + 1);
    video.channel_id = "sim";
    auto pool = GenerateCommentPool(config, v);
    if (!pool.ok()) {
      status[idx] = pool.status();
      return;
    }
    auto exposures = GenerateRankings(*pool, accounts, config, v, params[idx].lambda);
    if (!exposures.ok()) {
      status[idx] = exposures.status();
      return;
    }
    video.comments = std::move(*pool);
    video.exposures = std::move(*exposures);
  };
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(dynamic)
    for (int v = 0; v < n; ++v) build(v);
  } else {
    for (int v = 0; v < n; ++v) build(v);
  }
  for (const auto& s : status) AUDIT_RETURN_IF_ERROR(s);

  SimOutput out;
  out.dataset.accounts = accounts;
  out.dataset.videos = std::move(videos);
  out.truth.accounts = accounts;
  for (int v = 0; v < n; ++v) out.truth.videos.push_back({SimVideoId(v), params[static_cast<size_t>(v)]});
  AUDIT_RETURN_IF_ERROR(ValidateDataset(out.dataset));
  return out;
}

std::string GroundTruthJsonl(const SimOutput& output) {
  using json = nlohmann::ordered_json;
  std::string out;
  for (const auto& a : output.truth.accounts) {
    json j{{"type", "account"}, {"account_id", a.account_id}, {"group", std::string(GroupCode(a.group))}};
    out += j.dump() + "\n";
  }
  for (const auto& v : output.truth.videos) {
    json j{{"type", "video"},
           {"video_id", v.video_id},
           {"lambda", v.params.lambda},
           {"alpha", v.params.alpha},
           {"n_comments", v.params.n_comments},
           {"p_left", v.params.p_left},
           {"p_right", v.params.p_right},
           {"p_neutral", v.params.p_neutral}};
    out += j.dump() + "\n";
  }
  for (const auto& v : output.dataset.videos) {
    for (const auto& c : v.comments) {
      json j{{"type", "comment"},
             {"video_id", v.video_id},
             {"comment_id", c.comment_id},
             {"stance", std::string(StanceCode(*c.stance))},
             {"leaning", std::string(LeaningName(CollapseStance(*c.stance)))}};
      out += j.dump() + "\n";
    }
  }
  return out;
}

absl::StatusOr<std::filesystem::path> WriteSimulation(const SimOutput& output, const SimConfig& config,
                                                      const std::filesystem::path& dir) {
  AUDIT_ASSIGN_OR_RETURN(std::filesystem::path manifest, SaveDataset(output.dataset, dir));
  AUDIT_RETURN_IF_ERROR(WriteStringToFile(dir / "ground_truth.jsonl", GroundTruthJsonl(output)));
  AUDIT_RETURN_IF_ERROR(WriteStringToFile(dir / "config.txt", SimConfigToText(config)));
  return manifest;
}

}  // namespace audit
