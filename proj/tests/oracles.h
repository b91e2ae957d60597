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

// Independent reference computations used by the unit and acceptance tests.
// Each one takes a different route from the library code it checks.

#ifndef AUDIT_TESTS_ORACLES_H_
#define AUDIT_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace audit::oracle {

// Minimal number of insert / delete / substitute / adjacent-transpose
// operations, found by breadth-first search over literal edits. Symbols are
// drawn from the union of both inputs. Only feasible for short inputs.
inline int BfsEditDistance(const std::vector<int>& a, const std::vector<int>& b) {
  std::set<int> alphabet(a.begin(), a.end());
  alphabet.insert(b.begin(), b.end());
  const size_t max_len = std::max(a.size(), b.size()) + 1;
  std::map<std::vector<int>, int> dist{{a, 0}};
  std::queue<std::vector<int>> q;
  q.push(a);
  while (!q.empty()) {
    std::vector<int> s = q.front();
    q.pop();
    const int d = dist[s];
    if (s == b) return d;
    std::vector<std::vector<int>> next;
    for (size_t i = 0; i < s.size(); ++i) {
      auto del = s;
      del.erase(del.begin() + static_cast<long>(i));
      next.push_back(std::move(del));
      for (int c : alphabet) {
        if (c == s[i]) continue;
        auto sub = s;
        sub[i] = c;
        next.push_back(std::move(sub));
      }
      if (i + 1 < s.size() && s[i] != s[i + 1]) {
        auto tr = s;
        std::swap(tr[i], tr[i + 1]);
        next.push_back(std::move(tr));
      }
    }
    if (s.size() < max_len) {
      for (size_t i = 0; i <= s.size(); ++i) {
        for (int c : alphabet) {
          auto ins = s;
          ins.insert(ins.begin() + static_cast<long>(i), c);
          next.push_back(std::move(ins));
        }
      }
    }
    for (auto& n : next) {
      if (dist.emplace(n, d + 1).second) q.push(std::move(n));
    }
  }
  return -1;
}

// Lowrance-Wagner recursion with unit costs. The transposition case scans
// every anchor pair (k, l) with a[k] == b[j] and a[i] == b[l], not just the
// last occurrences, and memoizes on (i, j).
class FullRecurrence {
 public:
  FullRecurrence(const std::vector<int>& a, const std::vector<int>& b)
      : a_(a), b_(b), memo_((a.size() + 1) * (b.size() + 1), -1) {}

  int Distance() { return D(static_cast<int>(a_.size()), static_cast<int>(b_.size())); }

 private:
  int D(int i, int j) {
    if (i == 0) return j;
    if (j == 0) return i;
    int& slot = memo_[static_cast<size_t>(i) * (b_.size() + 1) + static_cast<size_t>(j)];
    if (slot >= 0) return slot;
    int best = std::min({D(i - 1, j) + 1, D(i, j - 1) + 1,
                         D(i - 1, j - 1) + (a_[static_cast<size_t>(i - 1)] == b_[static_cast<size_t>(j - 1)] ? 0 : 1)});
    for (int k = 1; k < i; ++k) {
      if (a_[static_cast<size_t>(k - 1)] != b_[static_cast<size_t>(j - 1)]) continue;
      for (int l = 1; l < j; ++l) {
        if (a_[static_cast<size_t>(i - 1)] != b_[static_cast<size_t>(l - 1)]) continue;
        best = std::min(best, D(k - 1, l - 1) + (i - k - 1) + 1 + (j - l - 1));
      }
    }
    slot = best;
    return best;
  }

  const std::vector<int>& a_;
  const std::vector<int>& b_;
  std::vector<int> memo_;
};

inline int FullRecurrenceDistance(const std::vector<int>& a, const std::vector<int>& b) {
  return FullRecurrence(a, b).Distance();
}

// Random duplicate-free list of length `len` over symbols 0..alphabet-1.
inline std::vector<int> RandomList(std::mt19937_64& rng, int len, int alphabet) {
  std::vector<int> symbols(static_cast<size_t>(alphabet));
  std::iota(symbols.begin(), symbols.end(), 0);
  std::shuffle(symbols.begin(), symbols.end(), rng);
  symbols.resize(static_cast<size_t>(len));
  return symbols;
}

// Average ranks by counting: 1 + #smaller + (#equal - 1) / 2.
inline std::vector<double> CountingRanks(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    double less = 0, equal = 0;
    for (double x : v) {
      less += x < v[i];
      equal += x == v[i];
    }
    r[i] = 1.0 + less + (equal - 1.0) / 2.0;
  }
  return r;
}

inline double Pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

inline double GiniDoubleLoop(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  if (mean == 0.0) return 0.0;
  double s = 0.0;
  for (double a : x) {
    for (double b : x) s += std::fabs(a - b);
  }
  return s / (2.0 * n * n * mean);
}

// Two-sided exact Mann-Whitney p by enumerating every choice of the first
// sample's ranks among 1..n1+n2: min(1, 2 * min(P(U <= u), P(U >= u))).
inline double MannWhitneyEnumeratedP(int n1, int n2, double u) {
  const int n = n1 + n2;
  std::vector<int> pick(static_cast<size_t>(n), 0);
  std::fill(pick.begin(), pick.begin() + n1, 1);
  std::sort(pick.begin(), pick.end());
  double total = 0, le = 0, ge = 0;
  do {
    double rank_sum = 0;
    for (int i = 0; i < n; ++i) {
      if (pick[static_cast<size_t>(i)]) rank_sum += i + 1;
    }
    const double uu = rank_sum - n1 * (n1 + 1) / 2.0;
    total += 1;
    le += uu <= u;
    ge += uu >= u;
  } while (std::next_permutation(pick.begin(), pick.end()));
  return std::min(1.0, 2.0 * std::min(le, ge) / total);
}

// Hubert-Arabie adjusted Rand index.
inline double AdjustedRandIndex(const std::vector<int>& a, const std::vector<int>& b) {
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> ra, rb;
  for (size_t i = 0; i < a.size(); ++i) {
    joint[{a[i], b[i]}] += 1;
    ra[a[i]] += 1;
    rb[b[i]] += 1;
  }
  auto c2 = [](double x) { return x * (x - 1) / 2; };
  double index = 0, sa = 0, sb = 0;
  for (const auto& [_, v] : joint) index += c2(v);
  for (const auto& [_, v] : ra) sa += c2(v);
  for (const auto& [_, v] : rb) sb += c2(v);
  const double expected = sa * sb / c2(static_cast<double>(a.size()));
  const double max_index = (sa + sb) / 2;
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

// One-sample Kolmogorov-Smirnov statistic against U(0, 1).
inline double KsUniform(std::vector<double> p) {
  std::sort(p.begin(), p.end());
  const double n = static_cast<double>(p.size());
  double d = 0;
  for (size_t i = 0; i < p.size(); ++i) {
    d = std::max({d, (static_cast<double>(i) + 1) / n - p[i], p[i] - static_cast<double>(i) / n});
  }
  return d;
}

}  // namespace audit::oracle

#endif  // AUDIT_TESTS_ORACLES_H_
