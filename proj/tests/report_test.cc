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

#include "audit/report.h"

#include <cstdlib>

#include "audit/simulator.h"
#include "audit/text_io.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "json.hpp"

namespace audit {
namespace {

using ::testing::HasSubstr;

std::filesystem::path FreshDir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("audit_report_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

AuditDataset SmallAudit(double lambda = 0.6) {
  SimConfig c;
  c.n_videos = 12;
  c.lambda = lambda;
  c.epsilon = 0.2;
  auto sim = RunSyntheticAudit(c);
  EXPECT_TRUE(sim.ok());
  return sim->dataset;
}

AnalyzeOptions FastOptions() {
  AnalyzeOptions o;
  o.n_permutations = 99;
  o.seed = 5;
  return o;
}

TEST(ReportTest, RendersExpectedFiles) {
  AnalyzeOptions options = FastOptions();
  options.write_matrices = true;
  auto report = BuildReport(SmallAudit(), options);
  ASSERT_TRUE(report.ok()) << report.status();
  const auto files = report->Render();
  for (const char* name : {"anosim.csv", "r_summary.csv", "features.csv", "correlations.csv", "pca.json",
                           "clusters.csv", "cluster_tests.csv", "report.json", "matrices/v0001_NDLD.csv"}) {
    EXPECT_TRUE(files.count(name)) << name;
  }
  auto anosim = ParseCsv(files.at("anosim.csv"));
  ASSERT_TRUE(anosim.ok());
  EXPECT_EQ((*anosim)[0][0], "video_id");
  EXPECT_EQ(anosim->size(), 1u + 12 * 6);
  auto summary = ParseCsv(files.at("r_summary.csv"));
  ASSERT_TRUE(summary.ok());
  EXPECT_EQ(summary->size(), 7u);
  auto json = nlohmann::json::parse(files.at("report.json"));
  EXPECT_EQ(json["n_videos"], 12);
  EXPECT_EQ(report->table.num_cols(), 10u);
  EXPECT_EQ(report->table.ColumnIndex("R_LR_NDLD") >= 0, true);
  ASSERT_TRUE(report->clusters.has_value());
  EXPECT_EQ(report->clusters->assignments.size(), report->pca_video_ids.size());
}

TEST(ReportTest, SerialParallelAndThreadCountsRenderIdentically) {
  const AuditDataset data = SmallAudit();
  AnalyzeOptions serial = FastOptions();
  serial.exec = Execution::kSerial;
  auto a = BuildReport(data, serial);
  SetWorkerCount(1);
  auto b = BuildReport(data, FastOptions());
  SetWorkerCount(4);
  auto c = BuildReport(data, FastOptions());
  ASSERT_TRUE(a.ok() && b.ok() && c.ok());
  EXPECT_EQ(a->Render(), b->Render());
  EXPECT_EQ(b->Render(), c->Render());
}

TEST(ReportTest, PermutationSeedChangesOnlyPValues) {
  const AuditDataset data = SmallAudit();
  AnalyzeOptions other = FastOptions();
  other.seed = 6;
  auto a = BuildReport(data, FastOptions());
  auto b = BuildReport(data, other);
  ASSERT_TRUE(a.ok() && b.ok());
  for (size_t v = 0; v < a->videos.size(); ++v) {
    const auto& ra = a->videos[v].result(Metric::kNdld, Grouping::kLeftRight);
    const auto& rb = b->videos[v].result(Metric::kNdld, Grouping::kLeftRight);
    ASSERT_TRUE(ra && rb);
    EXPECT_EQ(ra->r, rb->r);
  }
}

TEST(ReportTest, WriteFilesRemovesPartialOutput) {
  const auto dir = FreshDir("partial");
  std::filesystem::create_directories(dir / "b.csv");  // blocks the second write
  auto status = WriteFiles({{"a.csv", "x"}, {"b.csv", "y"}}, dir);
  EXPECT_FALSE(status.ok());
  EXPECT_FALSE(std::filesystem::exists(dir / "a.csv"));
}

TEST(ReportTest, ExposureOnStoredStances) {
  SimConfig c;
  c.n_videos = 6;
  c.lambda = 0.9;
  c.p_left = 0.5;
  c.p_right = 0.5;
  c.p_neutral = 0.0;
  auto sim = RunSyntheticAudit(c);
  ASSERT_TRUE(sim.ok());
  std::map<std::string, StanceMap> stances;
  for (const auto& v : sim->dataset.videos) stances[v.video_id] = StanceMapFromComments(v);
  auto report = RunExposure(sim->dataset, stances, ExposureOptions());
  ASSERT_TRUE(report.ok()) << report.status();
  EXPECT_EQ(report->posthoc_ipd.size(), 6u);
  EXPECT_EQ(report->tests.size(), report->kept.size() * 20);
}

TEST(ReportTest, StanceCsvForms) {
  const AuditDataset data = SmallAudit();
  const auto dir = FreshDir("stances");
  const std::string cid = data.videos[0].comments[0].comment_id;
  ASSERT_TRUE(WriteStringToFile(dir / "two.csv", "comment_id,label\n" + cid + ",Pro-Democrat\n").ok());
  auto two = ReadStanceCsv(dir / "two.csv", data);
  ASSERT_TRUE(two.ok()) << two.status();
  EXPECT_EQ(two->at("v0001").at(cid), Leaning::kLeft);
  ASSERT_TRUE(WriteStringToFile(dir / "three.csv", "video_id,comment_id,label\nv0002," + cid + ",maga\n").ok());
  EXPECT_FALSE(ReadStanceCsv(dir / "three.csv", data).ok());
  ASSERT_TRUE(WriteStringToFile(dir / "bad.csv", "id,stance\n").ok());
  EXPECT_FALSE(ReadStanceCsv(dir / "bad.csv", data).ok());
}

TEST(ReportTest, EvalClassifierJson) {
  const auto dir = FreshDir("eval");
  ASSERT_TRUE(WriteStringToFile(dir / "gold.csv", "comment_id,label\na,Neutral\nb,Pro-Democrat\nc,Anti-Democrat\n").ok());
  ASSERT_TRUE(WriteStringToFile(dir / "pred.csv", "comment_id,label\nc,Anti-Democrat\nb,Neutral\na,Neutral\n").ok());
  auto json = EvalClassifierJson(dir / "pred.csv", dir / "gold.csv");
  ASSERT_TRUE(json.ok()) << json.status();
  auto j = nlohmann::json::parse(*json);
  EXPECT_EQ(j["n"], 3);
  EXPECT_NEAR(j["accuracy"].get<double>(), 2.0 / 3.0, 1e-12);
}

TEST(ReportTest, ClassifySampleCsvWithStub) {
  const AuditDataset data = SmallAudit();
  CommentClassifier stub = [](const CommentRecord& c, std::string_view d) -> absl::StatusOr<Stance> {
    return ClassifyStub(c.text, d);
  };
  auto csv = ClassifySampleCsv(data, 50, 1, stub);
  ASSERT_TRUE(csv.ok());
  auto rows = ParseCsv(*csv);
  ASSERT_TRUE(rows.ok());
  EXPECT_EQ(rows->size(), 13u);
  EXPECT_EQ((*rows)[0][0], "video_id");
  EXPECT_EQ((*rows)[1][3], "50");
}

std::string RunCli(const std::string& args, int* code) {
  const auto log = std::filesystem::temp_directory_path() / "audit_cli_output.txt";
  *code = std::system((std::string(AUDIT_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1").c_str());
  auto text = ReadFileToString(log);
  return text.ok() ? *text : "";
}

TEST(CliTest, SimulateAnalyzeExposureEndToEnd) {
  const auto dir = FreshDir("cli");
  ASSERT_TRUE(WriteStringToFile(dir / "sim.txt", "n_videos = 6\nlambda = 0.6\nepsilon = 0.2\nseed = 3\n").ok());
  int code = 0;
  RunCli("simulate --config " + (dir / "sim.txt").string() + " --out " + (dir / "data").string(), &code);
  ASSERT_EQ(code, 0);
  const std::string manifest = (dir / "data" / "manifest.txt").string();
  RunCli("--threads 2 analyze --data " + manifest + " --permutations 99 --out " + (dir / "out").string(), &code);
  ASSERT_EQ(code, 0);
  EXPECT_TRUE(std::filesystem::exists(dir / "out" / "anosim.csv"));
  RunCli("exposure --data " + manifest + " --out " + (dir / "exp").string(), &code);
  ASSERT_EQ(code, 0);
  EXPECT_TRUE(std::filesystem::exists(dir / "exp" / "posthoc_ipd.csv"));
  const std::string classify = RunCli("classify --stub --data " + manifest, &code);
  ASSERT_EQ(code, 0);
  EXPECT_THAT(classify, HasSubstr("video_id,n_comments"));
}

TEST(CliTest, ErrorsAreReported) {
  const auto dir = FreshDir("cli_errors");
  ASSERT_TRUE(WriteStringToFile(dir / "manifest.txt", "accounts = a.jsonl\n").ok());
  int code = 0;
  const std::string out = RunCli("analyze --data " + (dir / "manifest.txt").string() + " --out " + (dir / "o").string(), &code);
  EXPECT_NE(code, 0);
  EXPECT_THAT(out, HasSubstr("audit: "));
  RunCli("frobnicate", &code);
  EXPECT_NE(code, 0);
}

}  // namespace
}  // namespace audit
