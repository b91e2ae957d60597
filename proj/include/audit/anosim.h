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

#ifndef AUDIT_ANOSIM_H_
#define AUDIT_ANOSIM_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "audit/common.h"
#include "audit/rank_metrics.h"

namespace audit {

// Accounts under comparison and their group label. Exactly two distinct
// labels, each held by at least two accounts.
struct GroupAssignment {
  std::vector<std::pair<std::string, int>> members;  // account_id -> label
};

struct NullSummary {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation
  double q05 = 0.0;
  double q50 = 0.0;
  double q95 = 0.0;
  friend bool operator==(const NullSummary&, const NullSummary&) = default;
};

struct AnosimResult {
  double r = 0.0;
  double mean_rank_between = 0.0;
  double mean_rank_within = 0.0;
  double p_value = 1.0;
  int n_permutations = 0;
  int n_accounts = 0;
  NullSummary null_r;

  // {"r","mean_rank_between","mean_rank_within","p_value","n_permutations",
  //  "null_mean","null_sd"}
  std::string ToJson() const;

  friend bool operator==(const AnosimResult&, const AnosimResult&) = default;
};

// Ranked off-diagonal dissimilarities of the grouped accounts, reusable
// across label permutations.
class AnosimProblem {
 public:
  static absl::StatusOr<AnosimProblem> Create(const DissimilarityMatrix& matrix,
                                              const GroupAssignment& groups);

  int n() const { return n_; }
  const std::vector<int>& labels() const { return labels_; }

  // R, mean between rank, mean within rank for a labelling of the n
  // accounts (0/1 per account).
  struct Stats {
    double r, mean_between, mean_within;
  };
  Stats Evaluate(const std::vector<int>& labels) const;

 private:
  int n_ = 0;
  std::vector<int> labels_;
  std::vector<int> pair_i_, pair_j_;
  std::vector<double> pair_rank_;
};

absl::StatusOr<double> AnosimR(const DissimilarityMatrix& matrix, const GroupAssignment& groups);

// Shuffles group labels over accounts (sizes preserved) n_perm times.
// Permutation t draws from the stream DeriveSeed(seed, t), so both execution
// paths return identical results.
// p = (1 + #{R_perm >= R_obs}) / (1 + n_perm).
absl::StatusOr<AnosimResult> AnosimPermutationTest(const DissimilarityMatrix& matrix,
                                                   const GroupAssignment& groups, int n_perm,
                                                   uint64_t seed,
                                                   Execution exec = Execution::kParallel);

// All permuted R values (index t = permutation t); exposed for calibration.
absl::StatusOr<std::vector<double>> AnosimNullDistribution(const AnosimProblem& problem, int n_perm,
                                                           uint64_t seed, Execution exec);

}  // namespace audit

#endif  // AUDIT_ANOSIM_H_
