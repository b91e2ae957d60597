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

#ifndef AUDIT_RANK_METRICS_H_
#define AUDIT_RANK_METRICS_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "audit/common.h"
#include "audit/data_model.h"

namespace audit {

enum class Metric { kJaccard, kNdld };

std::string_view MetricName(Metric metric);  // "JD" / "NDLD"

enum class DlVariant {
  // True minimal number of insert/delete/substitute/adjacent-transpose
  // operations (Lowrance-Wagner).
  kUnrestricted,
  // Optimal string alignment: no substring is edited twice.
  kRestricted,
};

// Symmetric account x account distances for one video under one metric.
class DissimilarityMatrix {
 public:
  DissimilarityMatrix(std::vector<std::string> account_ids, Metric metric, int k);

  size_t size() const { return account_ids_.size(); }
  const std::vector<std::string>& account_ids() const { return account_ids_; }
  Metric metric() const { return metric_; }
  int k() const { return k_; }

  double at(size_t i, size_t j) const { return values_[i * size() + j]; }
  // Writes (i, j) and (j, i).
  void set(size_t i, size_t j, double value);

  // Row of `account_id`, or -1.
  int IndexOf(std::string_view account_id) const;

  // Header row of account ids, then the square block at 9 significant digits.
  std::string ToCsv() const;

  friend bool operator==(const DissimilarityMatrix&, const DissimilarityMatrix&) = default;

 private:
  std::vector<std::string> account_ids_;
  std::vector<double> values_;
  Metric metric_;
  int k_;
};

// 1 - |a n b| / |a u b| over the set views of the two lists.
absl::StatusOr<double> JaccardDistance(std::span<const std::string> a,
                                       std::span<const std::string> b);

// Damerau-Levenshtein distance between two item lists (items compared by
// equality only).
size_t DamerauLevenshtein(std::span<const std::string> a, std::span<const std::string> b,
                          DlVariant variant = DlVariant::kUnrestricted);
size_t DamerauLevenshtein(std::span<const int> a, std::span<const int> b,
                          DlVariant variant = DlVariant::kUnrestricted);

// d_DL(a, b) / max(|a|, |b|).
absl::StatusOr<double> Ndld(std::span<const std::string> a, std::span<const std::string> b,
                            DlVariant variant = DlVariant::kUnrestricted);

// Pairwise matrix over every account with an exposure on `video`, each
// exposure truncated to its top k first. Rows follow the video's exposure
// order. Both execution paths produce identical matrices.
absl::StatusOr<DissimilarityMatrix> ComputeDissimilarityMatrix(
    const VideoRecord& video, Metric metric, int k, Execution exec = Execution::kParallel,
    DlVariant variant = DlVariant::kUnrestricted);

}  // namespace audit

#endif  // AUDIT_RANK_METRICS_H_
