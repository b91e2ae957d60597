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

#include "audit/anosim.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "absl/strings/str_cat.h"
#include "audit/group_stats.h"
#include "json.hpp"

namespace audit {

namespace {

// Counts R_perm >= R_obs up to rounding in the rank sums.
constexpr double kTieTolerance = 1e-12;

double Quantile(std::vector<double> sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const size_t lo = static_cast<size_t>(std::floor(h));
  const size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

std::string AnosimResult::ToJson() const {
  nlohmann::ordered_json j{{"r", r},
                           {"mean_rank_between", mean_rank_between},
                           {"mean_rank_within", mean_rank_within},
                           {"p_value", p_value},
                           {"n_permutations", n_permutations},
                           {"null_mean", null_r.mean},
                           {"null_sd", null_r.sd}};
  return j.dump();
}

absl::StatusOr<AnosimProblem> AnosimProblem::Create(const DissimilarityMatrix& matrix,
                                                    const GroupAssignment& groups) {
  std::map<int, int> sizes;
  for (const auto& [_, label] : groups.members) ++sizes[label];
  if (sizes.size() != 2) {
    return absl::InvalidArgumentError("ANOSIM needs exactly two group labels");
  }
  for (const auto& [label, size] : sizes) {
    if (size < 2) {
      return absl::InvalidArgumentError(absl::StrCat("group ", label, " has fewer than 2 members"));
    }
  }
  const int first_label = sizes.begin()->first;

  // Rows in matrix order, restricted to grouped accounts.
  std::vector<int> rows(matrix.size(), -1);
  std::vector<bool> seen(matrix.size(), false);
  for (const auto& [account, label] : groups.members) {
    const int idx = matrix.IndexOf(account);
    if (idx < 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("account \"", account, "\" missing from dissimilarity matrix"));
    }
    if (seen[static_cast<size_t>(idx)]) {
      return absl::InvalidArgumentError(absl::StrCat("account \"", account, "\" grouped twice"));
    }
    seen[static_cast<size_t>(idx)] = true;
    rows[static_cast<size_t>(idx)] = label == first_label ? 0 : 1;
  }
  AnosimProblem problem;
  std::vector<size_t> selected;
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= 0) {
      selected.push_back(i);
      problem.labels_.push_back(rows[i]);
    }
  }
  problem.n_ = static_cast<int>(selected.size());
  std::vector<double> values;
  for (size_t a = 0; a < selected.size(); ++a) {
    for (size_t b = a + 1; b < selected.size(); ++b) {
      problem.pair_i_.push_back(static_cast<int>(a));
      problem.pair_j_.push_back(static_cast<int>(b));
      values.push_back(matrix.at(selected[a], selected[b]));
    }
  }
  problem.pair_rank_ = AverageRanks(values);
  return problem;
}

AnosimProblem::Stats AnosimProblem::Evaluate(const std::vector<int>& labels) const {
  double sum_between = 0.0, sum_within = 0.0;
  size_t n_between = 0, n_within = 0;
  for (size_t p = 0; p < pair_rank_.size(); ++p) {
    if (labels[static_cast<size_t>(pair_i_[p])] != labels[static_cast<size_t>(pair_j_[p])]) {
      sum_between += pair_rank_[p];
      ++n_between;
    } else {
      sum_within += pair_rank_[p];
      ++n_within;
    }
  }
  Stats s;
  s.mean_between = sum_between / static_cast<double>(n_between);
  s.mean_within = sum_within / static_cast<double>(n_within);
  const double nd = static_cast<double>(n_);
  s.r = (s.mean_between - s.mean_within) / (nd * (nd - 1.0) / 4.0);
  return s;
}

absl::StatusOr<double> AnosimR(const DissimilarityMatrix& matrix, const GroupAssignment& groups) {
  AUDIT_ASSIGN_OR_RETURN(AnosimProblem problem, AnosimProblem::Create(matrix, groups));
  return problem.Evaluate(problem.labels()).r;
}

absl::StatusOr<std::vector<double>> AnosimNullDistribution(const AnosimProblem& problem, int n_perm,
                                                           uint64_t seed, Execution exec) {
  if (n_perm < 1) return absl::InvalidArgumentError("n_perm must be >= 1");
  std::vector<double> null_r(static_cast<size_t>(n_perm));
  auto one = [&](int t) {
    std::vector<int> labels = problem.labels();
    std::mt19937_64 rng(DeriveSeed(seed, t));
    std::shuffle(labels.begin(), labels.end(), rng);
    null_r[static_cast<size_t>(t)] = problem.Evaluate(labels).r;
  };
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(static)
    for (int t = 0; t < n_perm; ++t) one(t);
  } else {
    for (int t = 0; t < n_perm; ++t) one(t);
  }
  return null_r;
}

absl::StatusOr<AnosimResult> AnosimPermutationTest(const DissimilarityMatrix& matrix,
                                                   const GroupAssignment& groups, int n_perm,
                                                   uint64_t seed, Execution exec) {
  AUDIT_ASSIGN_OR_RETURN(AnosimProblem problem, AnosimProblem::Create(matrix, groups));
  AUDIT_ASSIGN_OR_RETURN(std::vector<double> null_r,
                         AnosimNullDistribution(problem, n_perm, seed, exec));
  const AnosimProblem::Stats observed = problem.Evaluate(problem.labels());
  AnosimResult result;
  result.r = observed.r;
  result.mean_rank_between = observed.mean_between;
  result.mean_rank_within = observed.mean_within;
  result.n_permutations = n_perm;
  result.n_accounts = problem.n();

  int at_least = 0;
  double sum = 0.0;
  for (double r : null_r) {
    if (r >= observed.r - kTieTolerance) ++at_least;
    sum += r;
  }
  result.p_value = (1.0 + at_least) / (1.0 + n_perm);
  const double mean = sum / n_perm;
  double ss = 0.0;
  for (double r : null_r) ss += (r - mean) * (r - mean);
  result.null_r.mean = mean;
  result.null_r.sd = n_perm > 1 ? std::sqrt(ss / (n_perm - 1)) : 0.0;
  std::sort(null_r.begin(), null_r.end());
  result.null_r.q05 = Quantile(null_r, 0.05);
  result.null_r.q50 = Quantile(null_r, 0.50);
  result.null_r.q95 = Quantile(null_r, 0.95);
  return result;
}

}  // namespace audit
