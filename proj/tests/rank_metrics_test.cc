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

#include "audit/rank_metrics.h"

#include <random>

#include "gtest/gtest.h"
#include "oracles.h"

namespace audit {
namespace {

std::vector<std::string> Ids(std::initializer_list<const char*> xs) { return {xs.begin(), xs.end()}; }

std::vector<std::string> Named(const std::vector<int>& xs, const std::string& prefix = "c") {
  std::vector<std::string> out;
  for (int x : xs) out.push_back(prefix + std::to_string(x));
  return out;
}

std::vector<std::string> Seq(int from, int to) {
  std::vector<std::string> out;
  for (int i = from; i < to; ++i) out.push_back("c" + std::to_string(i));
  return out;
}

TEST(JaccardTest, Examples) {
  EXPECT_EQ(*JaccardDistance(Seq(0, 10), Seq(0, 10)), 0.0);
  EXPECT_EQ(*JaccardDistance(Seq(0, 10), Seq(10, 20)), 1.0);
  // |a n b| = 5, |a u b| = 15.
  EXPECT_DOUBLE_EQ(*JaccardDistance(Seq(0, 10), Seq(5, 15)), 1.0 - 5.0 / 15.0);
  EXPECT_EQ(*JaccardDistance(Seq(0, 3), {}), 1.0);
  auto both_empty = JaccardDistance({}, {});
  EXPECT_FALSE(both_empty.ok());
  EXPECT_NE(both_empty.status().message().find("undefined JD"), absl::string_view::npos);
}

TEST(JaccardTest, IgnoresOrderAndIsAMetric) {
  EXPECT_EQ(*JaccardDistance(Ids({"a", "b", "c"}), Ids({"c", "a", "b"})), 0.0);
  std::mt19937_64 rng(7);
  for (int t = 0; t < 2000; ++t) {
    auto a = Named(oracle::RandomList(rng, 1 + t % 6, 9));
    auto b = Named(oracle::RandomList(rng, 1 + (t / 3) % 6, 9));
    auto c = Named(oracle::RandomList(rng, 1 + (t / 7) % 6, 9));
    const double ab = *JaccardDistance(a, b), bc = *JaccardDistance(b, c), ac = *JaccardDistance(a, c);
    EXPECT_EQ(ab, *JaccardDistance(b, a));
    EXPECT_LE(ac, ab + bc + 1e-15);
  }
}

TEST(NdldTest, Examples) {
  EXPECT_EQ(*Ndld(Seq(0, 10), Seq(0, 10)), 0.0);
  EXPECT_EQ(*Ndld(Seq(0, 10), Seq(10, 20)), 1.0);
  auto swapped = Seq(0, 10);
  std::swap(swapped[3], swapped[4]);
  EXPECT_EQ(*Ndld(Seq(0, 10), swapped), 0.1);
  auto both_empty = Ndld({}, {});
  EXPECT_FALSE(both_empty.ok());
  EXPECT_NE(both_empty.status().message().find("undefined NDLD"), absl::string_view::npos);
  // Unequal lengths normalize by the longer list.
  EXPECT_EQ(*Ndld(Seq(0, 7), Seq(0, 10)), 0.3);
}

TEST(NdldTest, UnrestrictedVersusOptimalStringAlignment) {
  // CA -> AC -> ABC takes 2 edits; OSA may not edit the transposed pair again.
  const auto a = Ids({"C", "A"}), b = Ids({"A", "B", "C"});
  EXPECT_EQ(DamerauLevenshtein(a, b, DlVariant::kUnrestricted), 2u);
  EXPECT_EQ(DamerauLevenshtein(a, b, DlVariant::kRestricted), 3u);
}

TEST(NdldTest, MatchesBreadthFirstSearchOnShortLists) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 400; ++t) {
    std::uniform_int_distribution<int> len(0, 4);
    std::uniform_int_distribution<int> sym(0, 3);
    std::vector<int> a(static_cast<size_t>(len(rng))), b(static_cast<size_t>(len(rng)));
    for (int& x : a) x = sym(rng);  // repeats allowed here
    for (int& x : b) x = sym(rng);
    const int bfs = oracle::BfsEditDistance(a, b);
    EXPECT_EQ(static_cast<int>(DamerauLevenshtein(a, b)), bfs);
    EXPECT_EQ(oracle::FullRecurrenceDistance(a, b), bfs);
  }
}

TEST(NdldTest, MatchesFullRecurrence) {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> len(0, 8);
  for (int t = 0; t < 3000; ++t) {
    auto a = oracle::RandomList(rng, len(rng), 10);
    auto b = oracle::RandomList(rng, len(rng), 10);
    if (a.empty() && b.empty()) continue;
    const double expected = static_cast<double>(oracle::FullRecurrenceDistance(a, b)) /
                            static_cast<double>(std::max(a.size(), b.size()));
    EXPECT_EQ(*Ndld(Named(a), Named(b)), expected);
  }
}

TEST(NdldTest, SymmetricBoundedAndRenamingInvariant) {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> len(1, 8);
  for (int t = 0; t < 2000; ++t) {
    auto a = oracle::RandomList(rng, len(rng), 10);
    auto b = oracle::RandomList(rng, len(rng), 10);
    const double d = *Ndld(Named(a), Named(b));
    EXPECT_EQ(d, *Ndld(Named(b), Named(a)));
    EXPECT_GE(d, 0.0);
    EXPECT_LE(d, 1.0);
    EXPECT_EQ(d == 0.0, a == b);
    EXPECT_EQ(d, *Ndld(Named(a, "renamed_"), Named(b, "renamed_")));
  }
}

VideoRecord VideoWith(const std::vector<std::vector<std::string>>& lists) {
  VideoRecord v;
  v.video_id = "v";
  for (size_t i = 0; i < lists.size(); ++i) {
    v.exposures.push_back({"v", "a" + std::to_string(i), lists[i]});
  }
  return v;
}

TEST(MatrixTest, PaperSizeAndInvariants) {
  std::mt19937_64 rng(5);
  std::vector<std::vector<std::string>> lists;
  for (int a = 0; a < 22; ++a) lists.push_back(Named(oracle::RandomList(rng, 12, 15)));
  const VideoRecord v = VideoWith(lists);
  for (Metric metric : {Metric::kJaccard, Metric::kNdld}) {
    auto m = ComputeDissimilarityMatrix(v, metric, 10);
    ASSERT_TRUE(m.ok());
    ASSERT_EQ(m->size(), 22u);
    int pairs = 0;
    for (size_t i = 0; i < 22; ++i) {
      EXPECT_EQ(m->at(i, i), 0.0);
      for (size_t j = i + 1; j < 22; ++j) {
        ++pairs;
        EXPECT_EQ(m->at(i, j), m->at(j, i));
        EXPECT_GE(m->at(i, j), 0.0);
        EXPECT_LE(m->at(i, j), 1.0);
        std::vector<std::string> a(lists[i].begin(), lists[i].begin() + 10);
        std::vector<std::string> b(lists[j].begin(), lists[j].begin() + 10);
        EXPECT_EQ(m->at(i, j), metric == Metric::kJaccard ? *JaccardDistance(a, b) : *Ndld(a, b));
      }
    }
    EXPECT_EQ(pairs, 231);
  }
}

TEST(MatrixTest, SerialAndParallelAreIdentical) {
  std::mt19937_64 rng(6);
  std::vector<std::vector<std::string>> lists;
  for (int a = 0; a < 40; ++a) lists.push_back(Named(oracle::RandomList(rng, 10, 14)));
  const VideoRecord v = VideoWith(lists);
  for (Metric metric : {Metric::kJaccard, Metric::kNdld}) {
    auto serial = ComputeDissimilarityMatrix(v, metric, 10, Execution::kSerial);
    auto parallel = ComputeDissimilarityMatrix(v, metric, 10, Execution::kParallel);
    ASSERT_TRUE(serial.ok() && parallel.ok());
    EXPECT_EQ(*serial, *parallel);
    EXPECT_EQ(serial->ToCsv(), parallel->ToCsv());
  }
}

TEST(MatrixTest, DegenerateCases) {
  auto same = ComputeDissimilarityMatrix(VideoWith({Seq(0, 10), Seq(0, 10), Seq(0, 10)}), Metric::kNdld, 10);
  ASSERT_TRUE(same.ok());
  for (size_t i = 0; i < 3; ++i) {
    for (size_t j = 0; j < 3; ++j) EXPECT_EQ(same->at(i, j), 0.0);
  }
  auto disjoint =
      ComputeDissimilarityMatrix(VideoWith({Seq(0, 10), Seq(10, 20), Seq(20, 30)}), Metric::kJaccard, 10);
  ASSERT_TRUE(disjoint.ok());
  for (size_t i = 0; i < 3; ++i) {
    for (size_t j = 0; j < 3; ++j) EXPECT_EQ(disjoint->at(i, j), i == j ? 0.0 : 1.0);
  }
  EXPECT_FALSE(ComputeDissimilarityMatrix(VideoWith({Seq(0, 10)}), Metric::kNdld, 10).ok());
  EXPECT_FALSE(ComputeDissimilarityMatrix(VideoWith({Seq(0, 3), Seq(0, 3)}), Metric::kNdld, 0).ok());
}

TEST(MatrixTest, AccountOrderOnlyRelabels) {
  std::mt19937_64 rng(8);
  std::vector<std::vector<std::string>> lists;
  for (int a = 0; a < 8; ++a) lists.push_back(Named(oracle::RandomList(rng, 10, 13)));
  VideoRecord v = VideoWith(lists);
  VideoRecord reversed = v;
  std::reverse(reversed.exposures.begin(), reversed.exposures.end());
  auto m1 = ComputeDissimilarityMatrix(v, Metric::kNdld, 10);
  auto m2 = ComputeDissimilarityMatrix(reversed, Metric::kNdld, 10);
  ASSERT_TRUE(m1.ok() && m2.ok());
  for (size_t i = 0; i < 8; ++i) {
    for (size_t j = 0; j < 8; ++j) {
      const int ri = m2->IndexOf(m1->account_ids()[i]);
      const int rj = m2->IndexOf(m1->account_ids()[j]);
      EXPECT_EQ(m1->at(i, j), m2->at(static_cast<size_t>(ri), static_cast<size_t>(rj)));
    }
  }
}

TEST(MatrixTest, TruncatesToK) {
  // Lists agree on the first 3 items only.
  auto m = ComputeDissimilarityMatrix(
      VideoWith({Ids({"a", "b", "c", "d"}), Ids({"a", "b", "c", "e"})}), Metric::kJaccard, 3);
  ASSERT_TRUE(m.ok());
  EXPECT_EQ(m->at(0, 1), 0.0);
  EXPECT_EQ(m->k(), 3);
}

TEST(MatrixTest, CsvLayout) {
  auto m = ComputeDissimilarityMatrix(VideoWith({Ids({"a", "b", "c"}), Ids({"a", "c", "b"})}), Metric::kNdld, 10);
  ASSERT_TRUE(m.ok());
  EXPECT_EQ(m->ToCsv(), "a0,a1\n0,0.333333333\n0.333333333,0\n");
}

}  // namespace
}  // namespace audit
