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

#ifndef AUDIT_STRUCTURE_ANALYSIS_H_
#define AUDIT_STRUCTURE_ANALYSIS_H_

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "audit/common.h"

namespace audit {

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

// Videos x named columns; missing cells hold NaN.
struct FeatureTable {
  std::vector<std::string> video_ids;
  std::vector<std::string> column_names;
  std::vector<std::vector<double>> rows;  // rows[video][column]

  size_t num_rows() const { return rows.size(); }
  size_t num_cols() const { return column_names.size(); }
  std::vector<double> Column(size_t c) const;
  int ColumnIndex(const std::string& name) const;

  absl::Status Validate() const;
  // Drops every row with a missing cell.
  FeatureTable CompleteRows() const;
  // Subset of columns, in the given order.
  absl::StatusOr<FeatureTable> Select(const std::vector<std::string>& names) const;
};

struct HeatmapCell {
  std::string feature;
  std::string metric;
  double rho = 0.0;
  double p = 1.0;
  int n = 0;  // complete pairs used
};

// Spearman rho/p for every (feature, metric) pair with pairwise deletion.
absl::StatusOr<std::vector<HeatmapCell>> CorrelationHeatmap(
    const FeatureTable& table, const std::vector<std::string>& feature_cols,
    const std::vector<std::string>& metric_cols);

// Column mean 0 and sample standard deviation 1. Requires complete rows.
absl::StatusOr<FeatureTable> Standardize(const FeatureTable& table);

// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
// Eigenvalues sorted descending; vectors[c] is the unit eigenvector of
// values[c].
struct SymmetricEigen {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;
};
SymmetricEigen JacobiEigen(std::vector<std::vector<double>> matrix, double tol = 1e-15,
                           int max_sweeps = 100);

enum class PcaMode {
  kCorrelation,  // standardize columns first
  kCovariance,   // center only
};

struct PcaResult {
  std::vector<std::string> column_names;
  std::vector<std::vector<double>> loadings;  // loadings[component][column]
  std::vector<double> eigenvalues;
  std::vector<double> explained_variance_ratio;
  std::vector<std::vector<double>> scores;  // scores[row][component]
  int n_components_retained = 0;            // smallest m reaching the target

  std::string ToJson() const;
};

// Components sorted by eigenvalue descending; each component's largest
// |loading| is made positive. Rows must be complete.
absl::StatusOr<PcaResult> Pca(const FeatureTable& table, PcaMode mode = PcaMode::kCorrelation,
                              double retain_cumulative = 0.90);

struct ClusterResult {
  std::vector<int> assignments;  // per point, in 0..k-1
  std::vector<std::vector<double>> centroids;
  double inertia = 0.0;
  int k = 0;
  uint64_t seed = 0;
  int best_restart = 0;
  // Inertia after each assignment step of the winning restart.
  std::vector<double> inertia_history;
};

struct KMeansOptions {
  int k = 3;
  uint64_t seed = 0;
  int restarts = 10;
  int max_iterations = 300;
  double shift_tolerance = 1e-8;
};

// k-means++ seeding and Lloyd iterations; the lowest-inertia restart wins
// (ties to the lowest restart index). Labels are renumbered so centroids
// ascend in their first coordinate.
absl::StatusOr<ClusterResult> KMeans(const std::vector<std::vector<double>>& points,
                                     const KMeansOptions& options,
                                     Execution exec = Execution::kParallel);

struct ClusterComparison {
  int cluster_a = 0;
  int cluster_b = 0;
  int n_a = 0;
  int n_b = 0;
  double u = 0.0;
  double p = 1.0;
};

// Mann-Whitney U of `values` between every pair of non-empty clusters.
absl::StatusOr<std::vector<ClusterComparison>> ClusterCompare(const std::vector<int>& assignments,
                                                              const std::vector<double>& values);

}  // namespace audit

#endif  // AUDIT_STRUCTURE_ANALYSIS_H_
