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

#include "audit/structure_analysis.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "absl/strings/str_cat.h"
#include "audit/group_stats.h"
#include "json.hpp"

namespace audit {

namespace {

double SquaredDistance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

// Nearest centroid (lowest index on ties) and its squared distance.
std::pair<int, double> Nearest(const std::vector<double>& p,
                               const std::vector<std::vector<double>>& centroids) {
  int best = 0;
  double best_d = SquaredDistance(p, centroids[0]);
  for (size_t c = 1; c < centroids.size(); ++c) {
    const double d = SquaredDistance(p, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(c);
    }
  }
  return {best, best_d};
}

ClusterResult RunLloyd(const std::vector<std::vector<double>>& points, const KMeansOptions& opt,
                       int restart) {
  const size_t n = points.size();
  const size_t k = static_cast<size_t>(opt.k);
  std::mt19937_64 rng(DeriveSeed(opt.seed, restart));
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // k-means++ seeding.
  std::vector<std::vector<double>> centroids;
  std::uniform_int_distribution<size_t> first(0, n - 1);
  centroids.push_back(points[first(rng)]);
  std::vector<double> d2(n);
  while (centroids.size() < k) {
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) {
      d2[i] = Nearest(points[i], centroids).second;
      total += d2[i];
    }
    size_t pick = n - 1;
    if (total > 0.0) {
      const double target = unit(rng) * total;
      double acc = 0.0;
      for (size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc > target) {
          pick = i;
          break;
        }
      }
    } else {
      pick = first(rng);
    }
    centroids.push_back(points[pick]);
  }

  ClusterResult result;
  result.k = opt.k;
  result.seed = opt.seed;
  result.best_restart = restart;
  result.assignments.assign(n, 0);
  auto assign = [&] {
    double inertia = 0.0;
    for (size_t i = 0; i < n; ++i) {
      auto [c, d] = Nearest(points[i], centroids);
      result.assignments[i] = c;
      inertia += d;
    }
    result.inertia_history.push_back(inertia);
    return inertia;
  };

  const size_t dims = points[0].size();
  for (int it = 0; it < opt.max_iterations; ++it) {
    assign();
    std::vector<std::vector<double>> next(k, std::vector<double>(dims, 0.0));
    std::vector<size_t> counts(k, 0);
    for (size_t i = 0; i < n; ++i) {
      const size_t c = static_cast<size_t>(result.assignments[i]);
      ++counts[c];
      for (size_t d = 0; d < dims; ++d) next[c][d] += points[i][d];
    }
    for (size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      for (double& v : next[c]) v /= static_cast<double>(counts[c]);
    }
    // An empty cluster takes over the point farthest from its centroid.
    for (size_t c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      size_t far = 0;
      double far_d = -1.0;
      for (size_t i = 0; i < n; ++i) {
        const size_t own = static_cast<size_t>(result.assignments[i]);
        if (counts[own] < 2) continue;
        const double d = SquaredDistance(points[i], next[own]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      next[c] = points[far];
      counts[c] = 1;
    }
    double shift = 0.0;
    for (size_t c = 0; c < k; ++c) shift = std::max(shift, std::sqrt(SquaredDistance(next[c], centroids[c])));
    centroids = std::move(next);
    if (shift < opt.shift_tolerance) break;
  }
  result.inertia = assign();
  result.centroids = centroids;
  return result;
}

}  // namespace

std::vector<double> FeatureTable::Column(size_t c) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[c]);
  return out;
}

int FeatureTable::ColumnIndex(const std::string& name) const {
  for (size_t i = 0; i < column_names.size(); ++i) {
    if (column_names[i] == name) return static_cast<int>(i);
  }
  return -1;
}

absl::Status FeatureTable::Validate() const {
  if (video_ids.size() != rows.size()) return absl::InvalidArgumentError("row count mismatch");
  for (const auto& r : rows) {
    if (r.size() != column_names.size()) return absl::InvalidArgumentError("column count mismatch");
  }
  return absl::OkStatus();
}

FeatureTable FeatureTable::CompleteRows() const {
  FeatureTable out{.video_ids = {}, .column_names = column_names, .rows = {}};
  for (size_t i = 0; i < rows.size(); ++i) {
    if (std::none_of(rows[i].begin(), rows[i].end(), [](double v) { return std::isnan(v); })) {
      out.video_ids.push_back(video_ids[i]);
      out.rows.push_back(rows[i]);
    }
  }
  return out;
}

absl::StatusOr<FeatureTable> FeatureTable::Select(const std::vector<std::string>& names) const {
  std::vector<size_t> idx;
  for (const auto& name : names) {
    const int c = ColumnIndex(name);
    if (c < 0) return absl::InvalidArgumentError(absl::StrCat("no column \"", name, "\""));
    idx.push_back(static_cast<size_t>(c));
  }
  FeatureTable out{.video_ids = video_ids, .column_names = names, .rows = {}};
  for (const auto& r : rows) {
    std::vector<double> row;
    for (size_t c : idx) row.push_back(r[c]);
    out.rows.push_back(std::move(row));
  }
  return out;
}

absl::StatusOr<std::vector<HeatmapCell>> CorrelationHeatmap(
    const FeatureTable& table, const std::vector<std::string>& feature_cols,
    const std::vector<std::string>& metric_cols) {
  AUDIT_RETURN_IF_ERROR(table.Validate());
  std::vector<HeatmapCell> cells;
  for (const auto& f : feature_cols) {
    const int fi = table.ColumnIndex(f);
    if (fi < 0) return absl::InvalidArgumentError(absl::StrCat("no column \"", f, "\""));
    for (const auto& m : metric_cols) {
      const int mi = table.ColumnIndex(m);
      if (mi < 0) return absl::InvalidArgumentError(absl::StrCat("no column \"", m, "\""));
      std::vector<double> x, y;
      for (const auto& row : table.rows) {
        const double a = row[static_cast<size_t>(fi)], b = row[static_cast<size_t>(mi)];
        if (std::isnan(a) || std::isnan(b)) continue;
        x.push_back(a);
        y.push_back(b);
      }
      auto s = SpearmanRho(x, y);
      if (!s.ok()) {
        return absl::InvalidArgumentError(
            absl::StrCat("correlation of ", f, " with ", m, ": ", s.status().message()));
      }
      cells.push_back({f, m, s->rho, s->p, static_cast<int>(x.size())});
    }
  }
  return cells;
}

absl::StatusOr<FeatureTable> Standardize(const FeatureTable& table) {
  AUDIT_RETURN_IF_ERROR(table.Validate());
  if (table.num_rows() < 2) return absl::InvalidArgumentError("standardize needs at least 2 rows");
  FeatureTable out = table;
  for (size_t c = 0; c < table.num_cols(); ++c) {
    const std::vector<double> col = table.Column(c);
    if (std::any_of(col.begin(), col.end(), [](double v) { return std::isnan(v); })) {
      return absl::InvalidArgumentError(absl::StrCat("column \"", table.column_names[c], "\" has missing cells"));
    }
    const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
    if (*lo == *hi) {
      return absl::InvalidArgumentError(absl::StrCat("column \"", table.column_names[c], "\" is constant"));
    }
    const double n = static_cast<double>(col.size());
    const double mean = std::accumulate(col.begin(), col.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : col) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    for (size_t r = 0; r < out.rows.size(); ++r) out.rows[r][c] = (col[r] - mean) / sd;
  }
  return out;
}

SymmetricEigen JacobiEigen(std::vector<std::vector<double>> a, double tol, int max_sweeps) {
  const size_t n = a.size();
  std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
  for (size_t i = 0; i < n; ++i) v[i][i] = 1.0;
  double scale = 0.0;
  for (const auto& row : a) {
    for (double x : row) scale += x * x;
  }
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (size_t p = 0; p < n; ++p) {
      for (size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    }
    if (off <= tol * tol * scale || off == 0.0) break;
    for (size_t p = 0; p < n; ++p) {
      for (size_t q = p + 1; q < n; ++q) {
        if (a[p][q] == 0.0) continue;
        // Rotation angle that zeroes a[p][q].
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (size_t k = 0; k < n; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t x, size_t y) { return a[x][x] > a[y][y]; });
  SymmetricEigen out;
  for (size_t idx : order) {
    out.values.push_back(a[idx][idx]);
    std::vector<double> vec(n);
    for (size_t k = 0; k < n; ++k) vec[k] = v[k][idx];
    out.vectors.push_back(std::move(vec));
  }
  return out;
}

std::string PcaResult::ToJson() const {
  nlohmann::ordered_json j;
  j["column_names"] = column_names;
  nlohmann::ordered_json comps = nlohmann::ordered_json::array();
  for (size_t c = 0; c < loadings.size(); ++c) {
    nlohmann::ordered_json comp;
    comp["component"] = absl::StrCat("PC", c + 1);
    comp["eigenvalue"] = eigenvalues[c];
    comp["explained_variance_ratio"] = explained_variance_ratio[c];
    comp["loadings"] = loadings[c];
    comps.push_back(std::move(comp));
  }
  j["components"] = std::move(comps);
  j["explained_variance_ratio"] = explained_variance_ratio;
  j["n_components_retained"] = n_components_retained;
  return j.dump(2);
}

absl::StatusOr<PcaResult> Pca(const FeatureTable& table, PcaMode mode, double retain_cumulative) {
  AUDIT_RETURN_IF_ERROR(table.Validate());
  if (table.num_rows() < 2) return absl::InvalidArgumentError("PCA needs at least 2 rows");
  if (table.num_cols() < 1) return absl::InvalidArgumentError("PCA needs at least 1 column");
  FeatureTable z;
  if (mode == PcaMode::kCorrelation) {
    AUDIT_ASSIGN_OR_RETURN(z, Standardize(table));
  } else {
    z = table;
    for (size_t c = 0; c < z.num_cols(); ++c) {
      const std::vector<double> col = z.Column(c);
      if (std::any_of(col.begin(), col.end(), [](double v) { return std::isnan(v); })) {
        return absl::InvalidArgumentError("PCA input has missing cells");
      }
      const double mean = std::accumulate(col.begin(), col.end(), 0.0) / static_cast<double>(col.size());
      for (auto& row : z.rows) row[c] -= mean;
    }
  }
  const size_t p = z.num_cols();
  const double denom = static_cast<double>(z.num_rows()) - 1.0;
  std::vector<std::vector<double>> cov(p, std::vector<double>(p, 0.0));
  for (const auto& row : z.rows) {
    for (size_t i = 0; i < p; ++i) {
      for (size_t j = i; j < p; ++j) cov[i][j] += row[i] * row[j];
    }
  }
  for (size_t i = 0; i < p; ++i) {
    for (size_t j = i; j < p; ++j) {
      cov[i][j] /= denom;
      cov[j][i] = cov[i][j];
    }
  }
  SymmetricEigen eig = JacobiEigen(cov);
  double trace = 0.0;
  for (size_t i = 0; i < p; ++i) trace += cov[i][i];
  if (!(trace > 0.0)) return absl::InvalidArgumentError("degenerate covariance: zero total variance");

  PcaResult result;
  result.column_names = table.column_names;
  double total = 0.0;
  for (double& ev : eig.values) {
    // Round-off can leave null-space eigenvalues slightly negative.
    if (ev < 0.0) ev = 0.0;
    total += ev;
  }
  for (size_t c = 0; c < p; ++c) {
    std::vector<double> vec = eig.vectors[c];
    size_t arg = 0;
    for (size_t k = 1; k < p; ++k) {
      if (std::fabs(vec[k]) > std::fabs(vec[arg])) arg = k;
    }
    if (vec[arg] < 0) {
      for (double& x : vec) x = -x;
    }
    result.loadings.push_back(std::move(vec));
    result.eigenvalues.push_back(eig.values[c]);
    result.explained_variance_ratio.push_back(eig.values[c] / total);
  }
  double cumulative = 0.0;
  result.n_components_retained = static_cast<int>(p);
  for (size_t c = 0; c < p; ++c) {
    cumulative += result.explained_variance_ratio[c];
    if (cumulative >= retain_cumulative - 1e-12) {
      result.n_components_retained = static_cast<int>(c + 1);
      break;
    }
  }
  for (const auto& row : z.rows) {
    std::vector<double> s(p, 0.0);
    for (size_t c = 0; c < p; ++c) {
      for (size_t k = 0; k < p; ++k) s[c] += row[k] * result.loadings[c][k];
    }
    result.scores.push_back(std::move(s));
  }
  return result;
}

absl::StatusOr<ClusterResult> KMeans(const std::vector<std::vector<double>>& points,
                                     const KMeansOptions& options, Execution exec) {
  if (options.k < 1) return absl::InvalidArgumentError("k must be >= 1");
  if (static_cast<size_t>(options.k) > points.size()) {
    return absl::InvalidArgumentError("k exceeds the number of points");
  }
  if (options.restarts < 1) return absl::InvalidArgumentError("restarts must be >= 1");
  for (const auto& p : points) {
    if (p.size() != points[0].size() || p.empty()) {
      return absl::InvalidArgumentError("points must share a non-zero dimension");
    }
  }
  std::vector<ClusterResult> runs(static_cast<size_t>(options.restarts));
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < options.restarts; ++r) runs[static_cast<size_t>(r)] = RunLloyd(points, options, r);
  } else {
    for (int r = 0; r < options.restarts; ++r) runs[static_cast<size_t>(r)] = RunLloyd(points, options, r);
  }
  size_t best = 0;
  for (size_t r = 1; r < runs.size(); ++r) {
    if (runs[r].inertia < runs[best].inertia) best = r;
  }
  ClusterResult result = std::move(runs[best]);

  // Canonical labels: ascending first centroid coordinate.
  std::vector<int> order(static_cast<size_t>(options.k));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return result.centroids[static_cast<size_t>(a)][0] < result.centroids[static_cast<size_t>(b)][0];
  });
  std::vector<int> relabel(order.size());
  std::vector<std::vector<double>> centroids;
  for (size_t i = 0; i < order.size(); ++i) {
    relabel[static_cast<size_t>(order[i])] = static_cast<int>(i);
    centroids.push_back(result.centroids[static_cast<size_t>(order[i])]);
  }
  for (int& a : result.assignments) a = relabel[static_cast<size_t>(a)];
  result.centroids = std::move(centroids);
  return result;
}

absl::StatusOr<std::vector<ClusterComparison>> ClusterCompare(const std::vector<int>& assignments,
                                                              const std::vector<double>& values) {
  if (assignments.size() != values.size()) {
    return absl::InvalidArgumentError("assignments and values differ in length");
  }
  int max_label = -1;
  for (int a : assignments) {
    if (a < 0) return absl::InvalidArgumentError("negative cluster label");
    max_label = std::max(max_label, a);
  }
  std::vector<std::vector<double>> by_cluster(static_cast<size_t>(max_label + 1));
  for (size_t i = 0; i < values.size(); ++i) {
    if (!std::isnan(values[i])) by_cluster[static_cast<size_t>(assignments[i])].push_back(values[i]);
  }
  std::vector<ClusterComparison> out;
  for (size_t a = 0; a < by_cluster.size(); ++a) {
    for (size_t b = a + 1; b < by_cluster.size(); ++b) {
      if (by_cluster[a].empty() || by_cluster[b].empty()) continue;
      AUDIT_ASSIGN_OR_RETURN(MannWhitneyResult mw, MannWhitneyU(by_cluster[a], by_cluster[b]));
      out.push_back({static_cast<int>(a), static_cast<int>(b), static_cast<int>(by_cluster[a].size()),
                     static_cast<int>(by_cluster[b].size()), mw.u, mw.p_two_sided});
    }
  }
  return out;
}

}  // namespace audit
