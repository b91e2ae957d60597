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

#include "audit/group_stats.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "absl/strings/str_cat.h"

namespace audit {

std::vector<double> AverageRanks(std::span<const double> values) {
  const size_t n = values.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // Positions i..j (0-based) share rank mean((i+1)..(j+1)).
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
    i = j + 1;
  }
  return ranks;
}

absl::StatusOr<double> Gini(std::span<const double> values) {
  if (values.size() < 2) return absl::InvalidArgumentError("gini needs at least 2 values");
  std::vector<double> sorted(values.begin(), values.end());
  for (double v : sorted) {
    if (v < 0 || std::isnan(v)) return absl::InvalidArgumentError("gini of a negative value");
  }
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double total = 0.0, weighted = 0.0;
  for (size_t i = 0; i < sorted.size(); ++i) {
    total += sorted[i];
    weighted += (2.0 * static_cast<double>(i + 1) - n - 1.0) * sorted[i];
  }
  if (total == 0.0) return 0.0;
  return weighted / (n * total);
}

std::vector<double> MannWhitneyUCounts(int n1, int n2) {
  // table[a][b] holds the count vector for sizes (a, b); U counts pairs in
  // which the first-sample value exceeds the second-sample value.
  std::vector<std::vector<std::vector<double>>> table(
      static_cast<size_t>(n1 + 1), std::vector<std::vector<double>>(static_cast<size_t>(n2 + 1)));
  for (int a = 0; a <= n1; ++a) {
    for (int b = 0; b <= n2; ++b) {
      auto& cur = table[static_cast<size_t>(a)][static_cast<size_t>(b)];
      cur.assign(static_cast<size_t>(a * b + 1), 0.0);
      if (a == 0 || b == 0) {
        cur[0] = 1.0;
        continue;
      }
      // Largest value belongs to sample 1 (beats all b) or to sample 2.
      const auto& from_a = table[static_cast<size_t>(a - 1)][static_cast<size_t>(b)];
      const auto& from_b = table[static_cast<size_t>(a)][static_cast<size_t>(b - 1)];
      for (size_t u = 0; u < from_a.size(); ++u) cur[u + static_cast<size_t>(b)] += from_a[u];
      for (size_t u = 0; u < from_b.size(); ++u) cur[u] += from_b[u];
    }
  }
  return table[static_cast<size_t>(n1)][static_cast<size_t>(n2)];
}

absl::StatusOr<MannWhitneyResult> MannWhitneyU(std::span<const double> a,
                                               std::span<const double> b) {
  if (a.empty() || b.empty()) return absl::InvalidArgumentError("mann-whitney: empty sample");
  const size_t n1 = a.size(), n2 = b.size(), n = n1 + n2;
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const std::vector<double> ranks = AverageRanks(pooled);
  const double rank_sum_a = std::accumulate(ranks.begin(), ranks.begin() + static_cast<long>(n1), 0.0);
  MannWhitneyResult result;
  result.u = rank_sum_a - static_cast<double>(n1 * (n1 + 1)) / 2.0;

  // Tie groups of the pooled sample.
  std::map<double, size_t> tie_sizes;
  for (double v : pooled) ++tie_sizes[v];
  double tie_term = 0.0;
  bool has_ties = false;
  for (const auto& [_, t] : tie_sizes) {
    if (t > 1) has_ties = true;
    const double td = static_cast<double>(t);
    tie_term += td * td * td - td;
  }

  if (n <= 20 && !has_ties) {
    const std::vector<double> counts = MannWhitneyUCounts(static_cast<int>(n1), static_cast<int>(n2));
    const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
    const size_t u = static_cast<size_t>(std::llround(result.u));
    double lower = 0.0, upper = 0.0;
    for (size_t t = 0; t < counts.size(); ++t) {
      if (t <= u) lower += counts[t];
      if (t >= u) upper += counts[t];
    }
    result.p_two_sided = std::min(1.0, 2.0 * std::min(lower, upper) / total);
    result.exact = true;
    return result;
  }

  const double nd = static_cast<double>(n);
  const double mu = static_cast<double>(n1 * n2) / 2.0;
  const double var = static_cast<double>(n1 * n2) / 12.0 * ((nd + 1.0) - tie_term / (nd * (nd - 1.0)));
  if (var <= 0.0) {
    result.p_two_sided = 1.0;
    return result;
  }
  const double z = std::max(0.0, std::fabs(result.u - mu) - 0.5) / std::sqrt(var);
  result.p_two_sided = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  return result;
}

absl::StatusOr<SpearmanResult> SpearmanRho(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) return absl::InvalidArgumentError("spearman: length mismatch");
  if (x.size() < 3) return absl::InvalidArgumentError("spearman: need at least 3 pairs");
  const std::vector<double> rx = AverageRanks(x);
  const std::vector<double> ry = AverageRanks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mx, dy = ry[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return absl::InvalidArgumentError("spearman: constant input");
  SpearmanResult result;
  result.rho = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  if (std::fabs(result.rho) >= 1.0) {
    result.p = 0.0;
    return result;
  }
  const double df = n - 2.0;
  const double t = result.rho * std::sqrt(df / (1.0 - result.rho * result.rho));
  boost::math::students_t dist(df);
  result.p = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t))));
  return result;
}

absl::StatusOr<double> CohensKappa(std::span<const std::string> labels_a,
                                   std::span<const std::string> labels_b) {
  if (labels_a.size() != labels_b.size()) return absl::InvalidArgumentError("kappa: length mismatch");
  if (labels_a.empty()) return absl::InvalidArgumentError("kappa: no labels");
  std::map<std::string, std::pair<double, double>> marginals;
  double agree = 0.0;
  for (size_t i = 0; i < labels_a.size(); ++i) {
    marginals[labels_a[i]].first += 1.0;
    marginals[labels_b[i]].second += 1.0;
    if (labels_a[i] == labels_b[i]) agree += 1.0;
  }
  const double n = static_cast<double>(labels_a.size());
  const double p_o = agree / n;
  double p_e = 0.0;
  for (const auto& [_, m] : marginals) p_e += (m.first / n) * (m.second / n);
  if (p_e >= 1.0) return absl::InvalidArgumentError("kappa undefined: expected agreement is 1");
  return (p_o - p_e) / (1.0 - p_e);
}

}  // namespace audit
