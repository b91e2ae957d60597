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

#include <algorithm>
#include <cmath>
#include <set>
#include <system_error>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "audit/text_io.h"
#include "json.hpp"

namespace audit {

namespace {

using json = nlohmann::ordered_json;

constexpr uint64_t kIpdSampleStream = 7;
constexpr std::string_view kFeatureColumns[] = {"log_volume", "gini_likes", "gini_replies", "ipd"};

std::pair<Group, Group> GroupingGroups(Grouping g) {
  switch (g) {
    case Grouping::kLeftRight:
      return {Group::kLeft, Group::kRight};
    case Grouping::kLeftControl:
      return {Group::kLeft, Group::kControl};
    case Grouping::kRightControl:
      return {Group::kRight, Group::kControl};
  }
  return {Group::kLeft, Group::kRight};
}

double MeanUpper(const DissimilarityMatrix& m) {
  double sum = 0.0;
  size_t n = 0;
  for (size_t i = 0; i < m.size(); ++i) {
    for (size_t j = i + 1; j < m.size(); ++j) {
      sum += m.at(i, j);
      ++n;
    }
  }
  return n > 0 ? sum / static_cast<double>(n) : 0.0;
}

// Linear interpolation between order statistics.
double Quantile(std::vector<double> v, double q) {
  if (v.empty()) return kMissing;
  std::sort(v.begin(), v.end());
  const double h = q * static_cast<double>(v.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(h));
  const size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

json Num(double x) { return std::isnan(x) ? json(nullptr) : json(x); }

bool IsConstant(const std::vector<double>& col) {
  return std::all_of(col.begin(), col.end(), [&](double v) { return v == col.front(); });
}

absl::StatusOr<std::vector<std::pair<std::string, std::string>>> ReadLabelFile(
    const std::filesystem::path& path) {
  AUDIT_ASSIGN_OR_RETURN(std::string text, ReadFileToString(path));
  AUDIT_ASSIGN_OR_RETURN(auto rows, ParseCsv(text));
  if (rows.empty() || rows[0] != std::vector<std::string>{"comment_id", "label"}) {
    return absl::InvalidArgumentError(absl::StrCat(path.string(), ": expected header comment_id,label"));
  }
  std::vector<std::pair<std::string, std::string>> out;
  std::set<std::string> seen;
  for (size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != 2) {
      return absl::InvalidArgumentError(absl::StrCat(path.string(), ":", r + 1, ": expected 2 fields"));
    }
    if (!seen.insert(rows[r][0]).second) {
      return absl::InvalidArgumentError(
          absl::StrCat(path.string(), ":", r + 1, ": duplicate comment_id \"", rows[r][0], "\""));
    }
    out.emplace_back(rows[r][0], rows[r][1]);
  }
  return out;
}

}  // namespace

std::string_view GroupingName(Grouping grouping) {
  switch (grouping) {
    case Grouping::kLeftRight:
      return "L-R";
    case Grouping::kLeftControl:
      return "L-C";
    case Grouping::kRightControl:
      return "R-C";
  }
  return "L-R";
}

std::string RColumnName(Grouping grouping, Metric metric) {
  std::string g(GroupingName(grouping));
  g.erase(std::remove(g.begin(), g.end(), '-'), g.end());
  return absl::StrCat("R_", g, "_", ToAbsl(MetricName(metric)));
}

absl::StatusOr<VideoAnalysis> AnalyzeVideo(const VideoRecord& video,
                                           const std::unordered_map<std::string, Group>& groups,
                                           size_t video_index, const AnalyzeOptions& options) {
  VideoAnalysis out;
  out.video_id = video.video_id;
  for (Metric metric : kAllMetrics) {
    AUDIT_ASSIGN_OR_RETURN(DissimilarityMatrix m,
                           ComputeDissimilarityMatrix(video, metric, options.k, Execution::kSerial));
    out.matrices.push_back(std::move(m));
  }
  out.mean_jd = MeanUpper(out.matrices[0]);
  out.mean_ndld = MeanUpper(out.matrices[1]);

  for (Grouping grouping : kAllGroupings) {
    const auto [ga, gb] = GroupingGroups(grouping);
    GroupAssignment assignment;
    int na = 0, nb = 0;
    for (const auto& id : out.matrices[0].account_ids()) {
      auto it = groups.find(id);
      if (it == groups.end()) return absl::InvalidArgumentError(absl::StrCat("unknown account \"", id, "\""));
      if (it->second == ga) {
        assignment.members.push_back({id, 0});
        ++na;
      } else if (it->second == gb) {
        assignment.members.push_back({id, 1});
        ++nb;
      }
    }
    if (na < 2 || nb < 2) continue;
    for (Metric metric : kAllMetrics) {
      const uint64_t seed = DeriveSeed(options.seed, video_index, static_cast<uint64_t>(grouping),
                                       static_cast<uint64_t>(metric));
      AUDIT_ASSIGN_OR_RETURN(
          AnosimResult r,
          AnosimPermutationTest(out.matrices[static_cast<size_t>(metric)], assignment,
                                options.n_permutations, seed, Execution::kSerial));
      out.anosim[static_cast<size_t>(metric)][static_cast<size_t>(grouping)] = r;
    }
  }

  CommentClassifier stored = [](const CommentRecord& c, std::string_view) -> absl::StatusOr<Stance> {
    if (!c.stance) return absl::NotFoundError("no stored stance");
    return *c.stance;
  };
  AUDIT_ASSIGN_OR_RETURN(out.ipd_sample,
                         SampleAndEstimate(video, options.ipd_sample,
                                           DeriveSeed(options.seed, video_index, kIpdSampleStream), stored));
  AUDIT_ASSIGN_OR_RETURN(out.features, ComputeFeatures(video, out.ipd_sample.counts));
  return out;
}

absl::StatusOr<AuditReport> BuildReport(const AuditDataset& dataset, const AnalyzeOptions& options) {
  AUDIT_RETURN_IF_ERROR(ValidateDataset(dataset));
  if (options.k < 1) return absl::InvalidArgumentError("k must be >= 1");
  if (options.n_permutations < 1) return absl::InvalidArgumentError("permutations must be >= 1");
  if (options.ipd_sample < 1) return absl::InvalidArgumentError("ipd sample must be >= 1");
  std::set<Group> present;
  for (const auto& a : dataset.accounts) present.insert(a.group);
  if (present.size() < 2) return absl::InvalidArgumentError("dataset needs at least 2 account groups");

  const auto groups = dataset.GroupIndex();
  const size_t n = dataset.videos.size();
  std::vector<absl::StatusOr<VideoAnalysis>> results(n, absl::UnknownError("not run"));
  if (options.exec == Execution::kParallel) {
#pragma omp parallel for schedule(dynamic)
    for (size_t v = 0; v < n; ++v) results[v] = AnalyzeVideo(dataset.videos[v], groups, v, options);
  } else {
    for (size_t v = 0; v < n; ++v) results[v] = AnalyzeVideo(dataset.videos[v], groups, v, options);
  }

  AuditReport report;
  report.options = options;
  for (size_t v = 0; v < n; ++v) {
    if (!results[v].ok()) {
      return absl::Status(results[v].status().code(),
                          absl::StrCat("video \"", dataset.videos[v].video_id,
                                       "\": ", results[v].status().message()));
    }
    report.videos.push_back(std::move(*results[v]));
  }

  // Feature table.
  FeatureTable& t = report.table;
  for (auto c : kFeatureColumns) t.column_names.emplace_back(c);
  std::vector<std::string> r_columns, ndld_columns;
  for (Metric metric : kAllMetrics) {
    for (Grouping grouping : kAllGroupings) {
      r_columns.push_back(RColumnName(grouping, metric));
      if (metric == Metric::kNdld) ndld_columns.push_back(r_columns.back());
    }
  }
  t.column_names.insert(t.column_names.end(), r_columns.begin(), r_columns.end());
  for (const auto& va : report.videos) {
    t.video_ids.push_back(va.video_id);
    std::vector<double> row{va.features.log_volume, va.features.gini_likes, va.features.gini_replies,
                            va.features.ipd.value_or(kMissing)};
    for (Metric metric : kAllMetrics) {
      for (Grouping grouping : kAllGroupings) {
        const auto& r = va.result(metric, grouping);
        row.push_back(r ? r->r : kMissing);
      }
    }
    t.rows.push_back(std::move(row));
  }

  // Correlation heatmap, cell by cell so one degenerate column does not
  // sink the rest.
  for (auto f : kFeatureColumns) {
    for (const auto& m : r_columns) {
      auto cell = CorrelationHeatmap(t, {std::string(f)}, {m});
      if (cell.ok()) {
        report.correlations.push_back(cell->front());
      } else {
        report.correlations.push_back({std::string(f), m, kMissing, kMissing, 0});
        report.notes.push_back(std::string(cell.status().message()));
      }
    }
  }

  // PCA and clustering on the 4 features + 3 R(NDLD) columns.
  std::vector<std::string> pca_columns(std::begin(kFeatureColumns), std::end(kFeatureColumns));
  pca_columns.insert(pca_columns.end(), ndld_columns.begin(), ndld_columns.end());
  AUDIT_ASSIGN_OR_RETURN(FeatureTable pca_input, t.Select(pca_columns));
  pca_input = pca_input.CompleteRows();
  if (pca_input.num_rows() < t.num_rows()) {
    report.notes.push_back(absl::StrCat(t.num_rows() - pca_input.num_rows(),
                                        " video(s) with missing cells dropped before PCA"));
  }
  std::vector<std::string> usable;
  for (size_t c = 0; c < pca_input.num_cols(); ++c) {
    const auto col = pca_input.Column(c);
    if (!col.empty() && IsConstant(col)) {
      report.notes.push_back(absl::StrCat("constant column ", pca_input.column_names[c], " dropped before PCA"));
    } else {
      usable.push_back(pca_input.column_names[c]);
    }
  }
  AUDIT_ASSIGN_OR_RETURN(pca_input, pca_input.Select(usable));
  const size_t min_rows = std::max<size_t>(3, static_cast<size_t>(options.kmeans_k));
  if (usable.size() < 2 || pca_input.num_rows() < min_rows) {
    report.notes.push_back("too few complete rows or columns for PCA and clustering");
  } else {
    auto pca = Pca(pca_input, PcaMode::kCorrelation, options.pca_retain);
    if (!pca.ok()) {
      report.notes.push_back(absl::StrCat("PCA skipped: ", pca.status().message()));
    } else {
      report.pca = std::move(*pca);
      report.pca_video_ids = pca_input.video_ids;
      std::vector<std::vector<double>> points;
      for (const auto& s : report.pca->scores) {
        points.emplace_back(s.begin(), s.begin() + report.pca->n_components_retained);
      }
      KMeansOptions ko;
      ko.k = options.kmeans_k;
      ko.seed = DeriveSeed(options.seed, 0x6b6d65616e73ULL);
      ko.restarts = options.kmeans_restarts;
      AUDIT_ASSIGN_OR_RETURN(ClusterResult clusters, KMeans(points, ko, options.exec));
      const int lr = pca_input.ColumnIndex(RColumnName(Grouping::kLeftRight, Metric::kNdld));
      if (lr >= 0) {
        AUDIT_ASSIGN_OR_RETURN(report.cluster_tests,
                               ClusterCompare(clusters.assignments, pca_input.Column(static_cast<size_t>(lr))));
      }
      report.clusters = std::move(clusters);
    }
  }
  return report;
}

std::map<std::string, std::string> AuditReport::Render() const {
  std::map<std::string, std::string> files;

  std::string anosim_csv = CsvRow({"video_id", "grouping", "metric", "r", "p_value", "mean_rank_between",
                                   "mean_rank_within", "n_accounts", "null_mean", "null_sd"});
  for (const auto& va : videos) {
    for (Grouping grouping : kAllGroupings) {
      for (Metric metric : kAllMetrics) {
        const auto& r = va.result(metric, grouping);
        if (!r) continue;
        anosim_csv += CsvRow({va.video_id, std::string(GroupingName(grouping)), std::string(MetricName(metric)),
                              FormatSig9(r->r), FormatSig9(r->p_value), FormatSig9(r->mean_rank_between),
                              FormatSig9(r->mean_rank_within), std::to_string(r->n_accounts),
                              FormatSig9(r->null_r.mean), FormatSig9(r->null_r.sd)});
      }
    }
  }
  files["anosim.csv"] = anosim_csv;

  json summary = json::array();
  std::string summary_csv = CsvRow({"grouping", "metric", "n", "median", "q25", "q75", "share_r_gt_0.25",
                                    "share_p_lt_0.01", "mean_pairwise_distance"});
  for (Grouping grouping : kAllGroupings) {
    for (Metric metric : kAllMetrics) {
      std::vector<double> rs;
      int big = 0, sig = 0;
      double mean_distance = 0.0;
      for (const auto& va : videos) {
        const auto& r = va.result(metric, grouping);
        if (!r) continue;
        rs.push_back(r->r);
        big += r->r > 0.25;
        sig += r->p_value < 0.01;
        mean_distance += metric == Metric::kJaccard ? va.mean_jd : va.mean_ndld;
      }
      const double count = static_cast<double>(rs.size());
      const double share_big = rs.empty() ? kMissing : big / count;
      const double share_sig = rs.empty() ? kMissing : sig / count;
      mean_distance = rs.empty() ? kMissing : mean_distance / count;
      const double median = Quantile(rs, 0.5), q25 = Quantile(rs, 0.25), q75 = Quantile(rs, 0.75);
      summary_csv += CsvRow({std::string(GroupingName(grouping)), std::string(MetricName(metric)),
                             std::to_string(rs.size()), FormatSig9(median), FormatSig9(q25), FormatSig9(q75),
                             FormatSig9(share_big), FormatSig9(share_sig), FormatSig9(mean_distance)});
      summary.push_back(json{{"grouping", GroupingName(grouping)},
                             {"metric", MetricName(metric)},
                             {"n", rs.size()},
                             {"median_r", Num(median)},
                             {"q25_r", Num(q25)},
                             {"q75_r", Num(q75)},
                             {"share_r_gt_0.25", Num(share_big)},
                             {"share_p_lt_0.01", Num(share_sig)}});
    }
  }
  files["r_summary.csv"] = summary_csv;

  std::vector<VideoFeatures> features;
  for (const auto& va : videos) features.push_back(va.features);
  files["features.csv"] = FeaturesCsv(features);

  std::string corr_csv = CsvRow({"feature", "metric", "rho", "p", "n"});
  json corr = json::array();
  for (const auto& c : correlations) {
    corr_csv += CsvRow({c.feature, c.metric, FormatSig9(c.rho), FormatSig9(c.p), std::to_string(c.n)});
    corr.push_back(json{{"feature", c.feature}, {"metric", c.metric}, {"rho", Num(c.rho)}, {"p", Num(c.p)}, {"n", c.n}});
  }
  files["correlations.csv"] = corr_csv;

  json clusters_json = nullptr;
  if (pca) {
    files["pca.json"] = pca->ToJson() + "\n";
    if (clusters) {
      std::string csv = CsvRow({"video_id", "cluster", "PC1", "PC2"});
      std::vector<int> sizes(static_cast<size_t>(clusters->k), 0);
      for (size_t i = 0; i < pca_video_ids.size(); ++i) {
        const auto& s = pca->scores[i];
        csv += CsvRow({pca_video_ids[i], std::to_string(clusters->assignments[i]), FormatSig9(s[0]),
                       s.size() > 1 ? FormatSig9(s[1]) : ""});
        ++sizes[static_cast<size_t>(clusters->assignments[i])];
      }
      files["clusters.csv"] = csv;
      std::string tests = CsvRow({"cluster_a", "cluster_b", "n_a", "n_b", "u", "p"});
      json tests_json = json::array();
      for (const auto& c : cluster_tests) {
        tests += CsvRow({std::to_string(c.cluster_a), std::to_string(c.cluster_b), std::to_string(c.n_a),
                         std::to_string(c.n_b), FormatSig9(c.u), FormatSig9(c.p)});
        tests_json.push_back(json{{"cluster_a", c.cluster_a}, {"cluster_b", c.cluster_b}, {"n_a", c.n_a},
                                  {"n_b", c.n_b}, {"u", c.u}, {"p", c.p}});
      }
      files["cluster_tests.csv"] = tests;
      clusters_json = json{{"k", clusters->k},
                           {"inertia", clusters->inertia},
                           {"sizes", sizes},
                           {"centroids", clusters->centroids},
                           {"r_lr_ndld_tests", tests_json}};
    }
  }

  json per_video = json::array();
  for (const auto& va : videos) {
    json anosim = json::object();
    for (Grouping grouping : kAllGroupings) {
      json g = json::object();
      for (Metric metric : kAllMetrics) {
        const auto& r = va.result(metric, grouping);
        g[std::string(MetricName(metric))] =
            r ? json{{"r", r->r}, {"p_value", r->p_value}} : json(nullptr);
      }
      anosim[std::string(GroupingName(grouping))] = g;
    }
    per_video.push_back(json{{"video_id", va.video_id},
                             {"mean_jd", va.mean_jd},
                             {"mean_ndld", va.mean_ndld},
                             {"anosim", anosim},
                             {"features",
                              {{"log_volume", va.features.log_volume},
                               {"gini_likes", va.features.gini_likes},
                               {"gini_replies", va.features.gini_replies},
                               {"ipd", va.features.ipd ? json(*va.features.ipd) : json(nullptr)},
                               {"ipd_sample_effective", va.ipd_sample.effective}}}});
  }

  json report{{"parameters",
               {{"k", options.k},
                {"permutations", options.n_permutations},
                {"seed", options.seed},
                {"ipd_sample", options.ipd_sample},
                {"kmeans_k", options.kmeans_k},
                {"pca_retain", options.pca_retain}}},
              {"n_videos", videos.size()},
              {"r_summary", summary},
              {"correlations", corr},
              {"pca", pca ? json::parse(pca->ToJson()) : json(nullptr)},
              {"clusters", clusters_json},
              {"notes", notes},
              {"videos", per_video}};
  files["report.json"] = report.dump(2) + "\n";

  if (options.write_matrices) {
    for (const auto& va : videos) {
      for (const auto& m : va.matrices) {
        files[absl::StrCat("matrices/", va.video_id, "_", ToAbsl(MetricName(m.metric())), ".csv")] = m.ToCsv();
      }
    }
  }
  return files;
}

absl::Status WriteFiles(const std::map<std::string, std::string>& files, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) return absl::PermissionDeniedError(absl::StrCat("cannot create ", dir.string(), ": ", ec.message()));
  std::vector<std::filesystem::path> written;
  for (const auto& [name, contents] : files) {
    const auto path = dir / name;
    std::filesystem::create_directories(path.parent_path(), ec);
    absl::Status s = ec ? absl::PermissionDeniedError(absl::StrCat("cannot create ", path.parent_path().string()))
                        : WriteStringToFile(path, contents);
    if (!s.ok()) {
      for (const auto& p : written) std::filesystem::remove(p, ec);
      return s;
    }
    written.push_back(path);
  }
  return absl::OkStatus();
}

absl::Status CmdAnalyze(const std::filesystem::path& manifest, const AnalyzeOptions& options,
                        const std::filesystem::path& out_dir) {
  AUDIT_ASSIGN_OR_RETURN(AuditDataset dataset, LoadDataset(manifest));
  AUDIT_ASSIGN_OR_RETURN(AuditReport report, BuildReport(dataset, options));
  return WriteFiles(report.Render(), out_dir);
}

absl::StatusOr<std::map<std::string, StanceMap>> ReadStanceCsv(const std::filesystem::path& path,
                                                               const AuditDataset& dataset) {
  AUDIT_ASSIGN_OR_RETURN(std::string text, ReadFileToString(path));
  AUDIT_ASSIGN_OR_RETURN(auto rows, ParseCsv(text));
  const std::vector<std::string> two{"comment_id", "label"};
  const std::vector<std::string> three{"video_id", "comment_id", "label"};
  if (rows.empty() || (rows[0] != two && rows[0] != three)) {
    return absl::InvalidArgumentError(
        absl::StrCat(path.string(), ": expected header comment_id,label or video_id,comment_id,label"));
  }
  const bool keyed = rows[0] == three;
  std::map<std::string, StanceMap> out;
  StanceMap global;
  for (size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != rows[0].size()) {
      return absl::InvalidArgumentError(absl::StrCat(path.string(), ":", r + 1, ": wrong field count"));
    }
    auto stance = ParseStanceLabel(row.back());
    if (!stance.ok()) {
      return absl::InvalidArgumentError(absl::StrCat(path.string(), ":", r + 1, ": ", stance.status().message()));
    }
    const Leaning leaning = CollapseStance(*stance);
    if (keyed) {
      out[row[0]][row[1]] = leaning;
    } else {
      global[row[0]] = leaning;
    }
  }
  for (const auto& v : dataset.videos) {
    StanceMap& m = out[v.video_id];
    if (keyed) continue;
    for (const auto& c : v.comments) {
      auto it = global.find(c.comment_id);
      if (it != global.end()) m.emplace(c.comment_id, it->second);
    }
  }
  return out;
}

absl::StatusOr<ExposureReport> RunExposure(const AuditDataset& dataset,
                                           const std::map<std::string, StanceMap>& stances,
                                           const ExposureOptions& options) {
  if (options.max_position < 1) return absl::InvalidArgumentError("max position must be >= 1");
  ExposureReport report;
  const auto groups = dataset.GroupIndex();
  std::vector<int> positions;
  for (int k = 1; k <= options.max_position; ++k) positions.push_back(k);
  for (const auto& v : dataset.videos) {
    auto it = stances.find(v.video_id);
    if (it == stances.end()) {
      return absl::InvalidArgumentError(absl::StrCat("no stance labels for video \"", v.video_id, "\""));
    }
    AUDIT_ASSIGN_OR_RETURN(double ipd, PosthocIpd(v, it->second, options.depth));
    report.posthoc_ipd.emplace_back(v.video_id, ipd);
    if (!(ipd < options.ipd_threshold)) continue;
    report.kept.push_back(v.video_id);
    for (Leaning leaning : {Leaning::kLeft, Leaning::kRight}) {
      AUDIT_ASSIGN_OR_RETURN(auto tests, ExposureDifferenceTest(v, groups, it->second, positions, leaning,
                                                                options.alpha));
      report.tests.insert(report.tests.end(), tests.begin(), tests.end());
    }
  }
  return report;
}

absl::Status CmdExposure(const std::filesystem::path& manifest, const std::filesystem::path& stances_csv,
                         const ExposureOptions& options, const std::filesystem::path& out_dir) {
  AUDIT_ASSIGN_OR_RETURN(AuditDataset dataset, LoadDataset(manifest));
  std::map<std::string, StanceMap> stances;
  if (stances_csv.empty()) {
    for (const auto& v : dataset.videos) stances[v.video_id] = StanceMapFromComments(v);
  } else {
    AUDIT_ASSIGN_OR_RETURN(stances, ReadStanceCsv(stances_csv, dataset));
  }
  AUDIT_ASSIGN_OR_RETURN(ExposureReport report, RunExposure(dataset, stances, options));
  std::set<std::string> kept(report.kept.begin(), report.kept.end());
  std::string ipd_csv = CsvRow({"video_id", "posthoc_ipd", "kept"});
  for (const auto& [id, ipd] : report.posthoc_ipd) {
    ipd_csv += CsvRow({id, FormatSig9(ipd), kept.count(id) ? "true" : "false"});
  }
  return WriteFiles({{"posthoc_ipd.csv", ipd_csv}, {"exposure_tests.csv", ExposureTestsCsv(report.tests)}},
                    out_dir);
}

absl::StatusOr<std::string> ClassifySampleCsv(const AuditDataset& dataset, int sample, uint64_t seed,
                                              const CommentClassifier& classifier) {
  std::map<std::string, StanceCounts> counts;
  std::vector<SampleEstimate> estimates;
  for (size_t v = 0; v < dataset.videos.size(); ++v) {
    const VideoRecord& video = dataset.videos[v];
    AUDIT_ASSIGN_OR_RETURN(SampleEstimate est,
                           SampleAndEstimate(video, sample, DeriveSeed(seed, v, kIpdSampleStream), classifier));
    counts[video.video_id] = est.counts;
    estimates.push_back(std::move(est));
  }
  AUDIT_ASSIGN_OR_RETURN(auto selected, SelectTestVideos(dataset.videos, counts));
  std::set<std::string> chosen(selected.begin(), selected.end());
  std::string csv = CsvRow({"video_id", "n_comments", "requested", "effective", "failed", "n_left", "n_right",
                            "n_neutral", "ipd", "selected"});
  for (size_t v = 0; v < dataset.videos.size(); ++v) {
    const auto& video = dataset.videos[v];
    const auto& est = estimates[v];
    auto ipd = Ipd(est.counts);
    csv += CsvRow({video.video_id, std::to_string(video.comments.size()), std::to_string(est.requested),
                   std::to_string(est.effective), std::to_string(est.failed_ids.size()),
                   std::to_string(est.counts.n_left), std::to_string(est.counts.n_right),
                   std::to_string(est.counts.n_neutral), ipd.ok() ? FormatSig9(*ipd) : "",
                   chosen.count(video.video_id) ? "true" : "false"});
  }
  return csv;
}

absl::StatusOr<std::string> EvalClassifierJson(const std::filesystem::path& pred_path,
                                               const std::filesystem::path& gold_path) {
  AUDIT_ASSIGN_OR_RETURN(auto pred_rows, ReadLabelFile(pred_path));
  AUDIT_ASSIGN_OR_RETURN(auto gold_rows, ReadLabelFile(gold_path));
  std::map<std::string, std::string> gold_by_id(gold_rows.begin(), gold_rows.end());
  if (gold_by_id.size() != pred_rows.size()) {
    return absl::InvalidArgumentError("prediction and gold files cover different comments");
  }
  std::vector<Stance> pred, gold;
  for (const auto& [id, label] : pred_rows) {
    auto g = gold_by_id.find(id);
    if (g == gold_by_id.end()) {
      return absl::InvalidArgumentError(absl::StrCat("comment \"", id, "\" has no gold label"));
    }
    AUDIT_ASSIGN_OR_RETURN(Stance p, ParseStanceLabel(label));
    AUDIT_ASSIGN_OR_RETURN(Stance q, ParseStanceLabel(g->second));
    pred.push_back(p);
    gold.push_back(q);
  }
  AUDIT_ASSIGN_OR_RETURN(AgreementReport r, EvaluateClassifier(pred, gold));
  std::vector<std::string> labels;
  for (Stance s : kAllStances) labels.emplace_back(StanceCode(s));
  json confusion = json::array();
  for (const auto& row : r.confusion) confusion.push_back(row);
  json out{{"n", r.n},
           {"accuracy", r.accuracy},
           {"kappa", Num(r.kappa)},
           {"labels", labels},
           {"confusion_gold_by_pred", confusion}};
  return out.dump(2) + "\n";
}

}  // namespace audit
