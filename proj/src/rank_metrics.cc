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

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "absl/strings/str_cat.h"
#include "audit/text_io.h"

namespace audit {

namespace {

// Maps items to dense ids so the DP compares integers.
class Interner {
 public:
  std::vector<int> Intern(std::span<const std::string> items) {
    std::vector<int> out;
    out.reserve(items.size());
    for (const auto& s : items) {
      auto [it, inserted] = ids_.emplace(s, static_cast<int>(ids_.size()));
      out.push_back(it->second);
    }
    return out;
  }
  int size() const { return static_cast<int>(ids_.size()); }

 private:
  std::unordered_map<std::string, int> ids_;
};

size_t Unrestricted(std::span<const int> a, std::span<const int> b, int alphabet) {
  const size_t m = a.size(), n = b.size();
  const size_t max_dist = m + n;
  const size_t w = n + 2;
  std::vector<size_t> h((m + 2) * w);
  auto at = [&](size_t i, size_t j) -> size_t& { return h[i * w + j]; };
  at(0, 0) = max_dist;
  for (size_t i = 0; i <= m; ++i) {
    at(i + 1, 0) = max_dist;
    at(i + 1, 1) = i;
  }
  for (size_t j = 0; j <= n; ++j) {
    at(0, j + 1) = max_dist;
    at(1, j + 1) = j;
  }
  // Last row of `a` in which each item occurred (0 = not yet).
  std::vector<size_t> last_row(static_cast<size_t>(alphabet), 0);
  for (size_t i = 1; i <= m; ++i) {
    size_t last_match_col = 0;
    for (size_t j = 1; j <= n; ++j) {
      const size_t i1 = last_row[static_cast<size_t>(b[j - 1])];
      const size_t j1 = last_match_col;
      size_t cost = 1;
      if (a[i - 1] == b[j - 1]) {
        cost = 0;
        last_match_col = j;
      }
      at(i + 1, j + 1) = std::min({at(i, j) + cost, at(i + 1, j) + 1, at(i, j + 1) + 1,
                                   at(i1, j1) + (i - i1 - 1) + 1 + (j - j1 - 1)});
    }
    last_row[static_cast<size_t>(a[i - 1])] = i;
  }
  return at(m + 1, n + 1);
}

size_t Restricted(std::span<const int> a, std::span<const int> b) {
  const size_t m = a.size(), n = b.size();
  const size_t w = n + 1;
  std::vector<size_t> d((m + 1) * w);
  auto at = [&](size_t i, size_t j) -> size_t& { return d[i * w + j]; };
  for (size_t i = 0; i <= m; ++i) at(i, 0) = i;
  for (size_t j = 0; j <= n; ++j) at(0, j) = j;
  for (size_t i = 1; i <= m; ++i) {
    for (size_t j = 1; j <= n; ++j) {
      const size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
      size_t best = std::min({at(i - 1, j) + 1, at(i, j - 1) + 1, at(i - 1, j - 1) + cost});
      if (i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1]) {
        best = std::min(best, at(i - 2, j - 2) + 1);
      }
      at(i, j) = best;
    }
  }
  return at(m, n);
}

size_t Distance(std::span<const int> a, std::span<const int> b, int alphabet, DlVariant variant) {
  return variant == DlVariant::kUnrestricted ? Unrestricted(a, b, alphabet) : Restricted(a, b);
}

double NdldOfIds(std::span<const int> a, std::span<const int> b, int alphabet, DlVariant variant) {
  const size_t denom = std::max(a.size(), b.size());
  return static_cast<double>(Distance(a, b, alphabet, variant)) / static_cast<double>(denom);
}

double JaccardOfIds(std::span<const int> a, std::span<const int> b) {
  std::unordered_set<int> sa(a.begin(), a.end());
  std::unordered_set<int> sb(b.begin(), b.end());
  size_t inter = 0;
  for (int x : sa) inter += sb.contains(x) ? 1 : 0;
  const size_t uni = sa.size() + sb.size() - inter;
  return 1.0 - static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace

std::string_view MetricName(Metric metric) { return metric == Metric::kJaccard ? "JD" : "NDLD"; }

DissimilarityMatrix::DissimilarityMatrix(std::vector<std::string> account_ids, Metric metric,
                                         int k)
    : account_ids_(std::move(account_ids)),
      values_(account_ids_.size() * account_ids_.size(), 0.0),
      metric_(metric),
      k_(k) {}

void DissimilarityMatrix::set(size_t i, size_t j, double value) {
  values_[i * size() + j] = value;
  values_[j * size() + i] = value;
}

int DissimilarityMatrix::IndexOf(std::string_view account_id) const {
  for (size_t i = 0; i < account_ids_.size(); ++i) {
    if (account_ids_[i] == account_id) return static_cast<int>(i);
  }
  return -1;
}

std::string DissimilarityMatrix::ToCsv() const {
  std::string out = CsvRow(account_ids_);
  std::vector<std::string> row(size());
  for (size_t i = 0; i < size(); ++i) {
    for (size_t j = 0; j < size(); ++j) row[j] = FormatSig9(at(i, j));
    out += CsvRow(row);
  }
  return out;
}

absl::StatusOr<double> JaccardDistance(std::span<const std::string> a,
                                       std::span<const std::string> b) {
  if (a.empty() && b.empty()) return absl::InvalidArgumentError("undefined JD: both sets empty");
  Interner interner;
  auto ia = interner.Intern(a);
  auto ib = interner.Intern(b);
  return JaccardOfIds(ia, ib);
}

size_t DamerauLevenshtein(std::span<const int> a, std::span<const int> b, DlVariant variant) {
  int alphabet = 0;
  for (int x : a) alphabet = std::max(alphabet, x + 1);
  for (int x : b) alphabet = std::max(alphabet, x + 1);
  return Distance(a, b, alphabet, variant);
}

size_t DamerauLevenshtein(std::span<const std::string> a, std::span<const std::string> b,
                          DlVariant variant) {
  Interner interner;
  auto ia = interner.Intern(a);
  auto ib = interner.Intern(b);
  return Distance(ia, ib, interner.size(), variant);
}

absl::StatusOr<double> Ndld(std::span<const std::string> a, std::span<const std::string> b,
                            DlVariant variant) {
  if (a.empty() && b.empty()) return absl::InvalidArgumentError("undefined NDLD: both lists empty");
  Interner interner;
  auto ia = interner.Intern(a);
  auto ib = interner.Intern(b);
  return NdldOfIds(ia, ib, interner.size(), variant);
}

absl::StatusOr<DissimilarityMatrix> ComputeDissimilarityMatrix(const VideoRecord& video,
                                                               Metric metric, int k,
                                                               Execution exec,
                                                               DlVariant variant) {
  if (k < 1) return absl::InvalidArgumentError("k must be >= 1");
  if (video.exposures.size() < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("video \"", video.video_id, "\" has fewer than 2 exposures"));
  }
  const size_t n = video.exposures.size();
  std::vector<std::string> ids;
  std::vector<std::vector<int>> lists;
  Interner interner;
  for (const auto& e : video.exposures) {
    ids.push_back(e.account_id);
    lists.push_back(interner.Intern(TruncateTopK(e, k).items));
  }
  for (const auto& l : lists) {
    if (l.empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat("empty exposure on video \"", video.video_id, "\""));
    }
  }
  const int alphabet = interner.size();
  DissimilarityMatrix matrix(std::move(ids), metric, k);

  // Pairs (i < j) enumerated row-major; every pair owns its two cells.
  std::vector<std::pair<size_t, size_t>> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  auto compute = [&](size_t p) {
    const auto [i, j] = pairs[p];
    const double v = metric == Metric::kJaccard
                         ? JaccardOfIds(lists[i], lists[j])
                         : NdldOfIds(lists[i], lists[j], alphabet, variant);
    matrix.set(i, j, v);
  };
  const long np = static_cast<long>(pairs.size());
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(static)
    for (long p = 0; p < np; ++p) compute(static_cast<size_t>(p));
  } else {
    for (long p = 0; p < np; ++p) compute(static_cast<size_t>(p));
  }
  return matrix;
}

}  // namespace audit
