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

#include "audit/anosim.h"
#include "audit/rank_metrics.h"
#include "audit/stance.h"
#include "audit/video_features.h"
#include "gtest/gtest.h"
#include "oracles.h"

namespace audit {
namespace {

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

GroupAssignment LeftRight(const AuditDataset& d) {
  GroupAssignment g;
  for (const auto& a : d.accounts) {
    if (a.group != Group::kControl) g.members.push_back({a.account_id, a.group == Group::kLeft ? 0 : 1});
  }
  return g;
}

std::vector<double> RLeftRight(const AuditDataset& d, Metric metric) {
  std::vector<double> out;
  for (const auto& v : d.videos) {
    auto m = ComputeDissimilarityMatrix(v, metric, 10);
    EXPECT_TRUE(m.ok());
    auto r = AnosimR(*m, LeftRight(d));
    EXPECT_TRUE(r.ok()) << r.status();
    out.push_back(r.ok() ? *r : 0.0);
  }
  return out;
}

StanceCounts StoredCounts(const VideoRecord& v) {
  StanceCounts c;
  for (const auto& comment : v.comments) c.Add(CollapseStance(*comment.stance));
  return c;
}

TEST(SimConfigTest, TextRoundTrip) {
  SimConfig c;
  c.n_videos = 7;
  c.lambda = 0.1 + 0.2;
  c.epsilon = 1.0 / 3.0;
  c.sweep = SweepMode::kVolume;
  c.seed = 123456789012345ULL;
  auto parsed = ParseSimConfig(SimConfigToText(c));
  ASSERT_TRUE(parsed.ok()) << parsed.status();
  EXPECT_EQ(SimConfigToText(*parsed), SimConfigToText(c));
  EXPECT_EQ(parsed->lambda, c.lambda);
  EXPECT_EQ(parsed->epsilon, c.epsilon);
  EXPECT_EQ(parsed->seed, c.seed);
  EXPECT_EQ(parsed->sweep, SweepMode::kVolume);
}

TEST(SimConfigTest, Validation) {
  EXPECT_FALSE(ParseSimConfig("colour = red\n").ok());
  EXPECT_FALSE(ParseSimConfig("lambda = 1.5\n").ok());
  EXPECT_FALSE(ParseSimConfig("p_left = 0.9\n").ok());
  EXPECT_FALSE(ParseSimConfig("sweep = sideways\n").ok());
  EXPECT_FALSE(ParseSimConfig("n_videos = ten\n").ok());
  SimConfig c;
  c.comments_per_video = 5;
  EXPECT_FALSE(ValidateSimConfig(c).ok());
  c = SimConfig();
  c.n_left = 0;
  c.n_right = 0;
  c.n_control = 1;
  EXPECT_FALSE(ValidateSimConfig(c).ok());
  c.n_right = 1;
  EXPECT_TRUE(ValidateSimConfig(c).ok());
  EXPECT_TRUE(ValidateSimConfig(SimConfig()).ok());
}

TEST(SimulatorTest, AccountsAndIds) {
  const auto accounts = SimAccounts(SimConfig());
  ASSERT_EQ(accounts.size(), 22u);
  EXPECT_EQ(accounts.front().account_id, "L01");
  EXPECT_EQ(accounts[9].account_id, "R01");
  EXPECT_EQ(accounts.back().account_id, "C05");
  EXPECT_EQ(SimVideoId(0), "v0001");
}

TEST(SimulatorTest, AlphaControlsLikeInequality) {
  SimConfig flat;
  flat.alpha = 0.0;
  SimConfig rich;
  rich.alpha = 1.0;
  double rich_sum = 0;
  for (int v = 0; v < 20; ++v) {
    for (SimConfig* c : {&flat, &rich}) {
      auto pool = GenerateCommentPool(*c, v);
      ASSERT_TRUE(pool.ok());
      std::vector<double> likes;
      int64_t total = 0;
      for (const auto& comment : *pool) {
        likes.push_back(static_cast<double>(comment.like_count));
        total += comment.like_count;
      }
      EXPECT_EQ(total, 2000);
      const double g = oracle::GiniDoubleLoop(likes);
      if (c == &flat) {
        EXPECT_LT(g, 0.2);
      } else {
        rich_sum += g;
      }
    }
  }
  EXPECT_GT(rich_sum / 20, 0.5);
}

TEST(SimulatorTest, MixtureControlsIpd) {
  SimConfig balanced;
  balanced.p_left = 0.5;
  balanced.p_right = 0.5;
  balanced.p_neutral = 0.0;
  balanced.n_videos = 20;
  SimConfig skewed = balanced;
  skewed.p_left = 0.8;
  skewed.p_right = 0.2;
  auto b = RunSyntheticAudit(balanced);
  auto s = RunSyntheticAudit(skewed);
  ASSERT_TRUE(b.ok() && s.ok());
  // Binomial spread at 200 comments: sd of IPD is about 0.07.
  double mean = 0;
  for (size_t v = 0; v < 20; ++v) {
    const double ipd = *Ipd(StoredCounts(b->dataset.videos[v]));
    mean += ipd / 20;
    EXPECT_LT(ipd, 0.25);
    EXPECT_NEAR(*Ipd(StoredCounts(s->dataset.videos[v])), 0.6, 0.25);
  }
  EXPECT_LT(mean, 0.1);
}

TEST(SimulatorTest, AsymmetricMixtureRaisesIpd) {
  SimConfig balanced;
  balanced.lambda = 0.3;
  balanced.epsilon = 0.2;
  SimConfig skewed = balanced;
  skewed.p_left = 0.6;
  skewed.p_right = 0.2;
  skewed.p_neutral = 0.2;
  auto b = RunSyntheticAudit(balanced);
  auto s = RunSyntheticAudit(skewed);
  ASSERT_TRUE(b.ok() && s.ok());
  double ipd_b = 0, ipd_s = 0;
  for (size_t v = 0; v < b->dataset.videos.size(); ++v) {
    ipd_b += *Ipd(StoredCounts(b->dataset.videos[v]));
    ipd_s += *Ipd(StoredCounts(s->dataset.videos[v]));
  }
  EXPECT_GT(ipd_s, ipd_b);
}

TEST(SimulatorTest, NoPersonalizationNoNoiseGivesIdenticalLists) {
  SimConfig c;
  c.n_videos = 5;
  c.lambda = 0.0;
  c.epsilon = 0.0;
  c.composition_jitter = 0.0;
  auto sim = RunSyntheticAudit(c);
  ASSERT_TRUE(sim.ok());
  for (const auto& v : sim->dataset.videos) {
    for (const auto& e : v.exposures) EXPECT_EQ(e.items, v.exposures.front().items);
  }
}

TEST(SimulatorTest, FullPersonalizationSeparatesGroups) {
  SimConfig c;
  c.n_videos = 10;
  c.lambda = 1.0;
  c.epsilon = 0.0;
  c.composition_jitter = 0.0;
  auto sim = RunSyntheticAudit(c);
  ASSERT_TRUE(sim.ok());
  for (double r : RLeftRight(sim->dataset, Metric::kNdld)) EXPECT_EQ(r, 1.0);
  // Composition is shared, so JD stays 0.
  for (const auto& v : sim->dataset.videos) {
    auto m = ComputeDissimilarityMatrix(v, Metric::kJaccard, 10);
    ASSERT_TRUE(m.ok());
    for (size_t i = 0; i < m->size(); ++i) {
      for (size_t j = 0; j < m->size(); ++j) EXPECT_EQ(m->at(i, j), 0.0);
    }
  }
}

TEST(SimulatorTest, SerialParallelAndRepeatRunsAgree) {
  for (SweepMode sweep : {SweepMode::kNone, SweepMode::kImbalance, SweepMode::kVolume}) {
    SimConfig c;
    c.n_videos = 12;
    c.lambda = 0.5;
    c.sweep = sweep;
    auto serial = RunSyntheticAudit(c, Execution::kSerial);
    auto parallel = RunSyntheticAudit(c, Execution::kParallel);
    auto again = RunSyntheticAudit(c, Execution::kParallel);
    ASSERT_TRUE(serial.ok() && parallel.ok() && again.ok());
    EXPECT_EQ(serial->dataset, parallel->dataset);
    EXPECT_EQ(parallel->dataset, again->dataset);
    EXPECT_EQ(GroundTruthJsonl(*serial), GroundTruthJsonl(*parallel));
    c.seed = 2;
    auto other = RunSyntheticAudit(c);
    ASSERT_TRUE(other.ok());
    EXPECT_NE(other->dataset, serial->dataset);
  }
}

TEST(SimulatorTest, VideoIsIndependentOfVideoCount) {
  SimConfig small;
  small.n_videos = 3;
  SimConfig large;
  large.n_videos = 9;
  auto a = RunSyntheticAudit(small);
  auto b = RunSyntheticAudit(large);
  ASSERT_TRUE(a.ok() && b.ok());
  for (size_t v = 0; v < 3; ++v) EXPECT_EQ(a->dataset.videos[v], b->dataset.videos[v]);
}

TEST(SimulatorTest, PersonalizationRaisesSeparationMonotonically) {
  double previous = -1.0;
  for (double lambda : {0.0, 0.3, 0.6, 0.9}) {
    SimConfig c;
    c.lambda = lambda;
    c.epsilon = 0.2;
    auto sim = RunSyntheticAudit(c);
    ASSERT_TRUE(sim.ok());
    const double median = Median(RLeftRight(sim->dataset, Metric::kNdld));
    EXPECT_GT(median, previous) << "lambda " << lambda;
    if (lambda == 0.0) EXPECT_LT(std::fabs(median), 0.1);
    previous = median;
  }
}

TEST(SimulatorTest, SweepsResolvePerVideoParameters) {
  SimConfig c;
  c.lambda = 0.6;
  c.sweep = SweepMode::kImbalance;
  for (int v = 0; v < 30; ++v) {
    const VideoParams p = ResolveVideoParams(c, v);
    EXPECT_NEAR(p.p_left + p.p_right, 0.9, 1e-12);
    const double d = std::fabs(p.p_left - p.p_right) / 0.9;
    EXPECT_LE(d, c.imbalance_max + 1e-12);
    // lambda scales with the drawn imbalance.
    EXPECT_NEAR(p.lambda, c.lambda * d / c.imbalance_max, 1e-12);
  }
  c.sweep = SweepMode::kVolume;
  for (int v = 0; v < 30; ++v) {
    const VideoParams p = ResolveVideoParams(c, v);
    EXPECT_GE(p.n_comments, c.volume_min);
    EXPECT_LE(p.n_comments, c.volume_max);
    EXPECT_NEAR(p.alpha / c.alpha, p.lambda / c.lambda, 1e-12);
  }
}

TEST(SimulatorTest, WritesLoadableBundle) {
  SimConfig c;
  c.n_videos = 2;
  auto sim = RunSyntheticAudit(c);
  ASSERT_TRUE(sim.ok());
  const auto dir = std::filesystem::temp_directory_path() / "audit_sim_bundle";
  std::filesystem::remove_all(dir);
  auto manifest = WriteSimulation(*sim, c, dir);
  ASSERT_TRUE(manifest.ok());
  EXPECT_TRUE(std::filesystem::exists(dir / "ground_truth.jsonl"));
  EXPECT_TRUE(std::filesystem::exists(dir / "config.txt"));
  auto loaded = LoadDataset(*manifest);
  ASSERT_TRUE(loaded.ok());
  EXPECT_EQ(*loaded, sim->dataset);
}

}  // namespace
}  // namespace audit
