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

#ifndef AUDIT_GROUP_STATS_H_
#define AUDIT_GROUP_STATS_H_

#include <span>
#include <string>
#include <vector>

#include "audit/common.h"

namespace audit {

// 1-based ranks; tied values share the mean of the ranks they span.
std::vector<double> AverageRanks(std::span<const double> values);

// Mean absolute difference over all ordered pairs divided by twice the mean:
// sum_i sum_j |x_i - x_j| / (2 n^2 mean). Zero when the mean is zero.
absl::StatusOr<double> Gini(std::span<const double> values);

struct MannWhitneyResult {
  double u = 0.0;  // U of the first sample
  double p_two_sided = 1.0;
  bool exact = false;
};

// Exact null distribution when |a| + |b| <= 20 and there are no ties;
// otherwise the normal approximation with tie and continuity corrections.
absl::StatusOr<MannWhitneyResult> MannWhitneyU(std::span<const double> a,
                                               std::span<const double> b);

// Number of arrangements of n1 + n2 distinct values giving each U in
// [0, n1 * n2].
std::vector<double> MannWhitneyUCounts(int n1, int n2);

struct SpearmanResult {
  double rho = 0.0;
  double p = 1.0;  // two-sided, Student t with n - 2 degrees of freedom
};

absl::StatusOr<SpearmanResult> SpearmanRho(std::span<const double> x, std::span<const double> y);

// Labels are opaque category strings; p_e is built from the two raters'
// marginals.
absl::StatusOr<double> CohensKappa(std::span<const std::string> labels_a,
                                   std::span<const std::string> labels_b);

}  // namespace audit

#endif  // AUDIT_GROUP_STATS_H_
