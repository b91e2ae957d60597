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

#ifndef AUDIT_COMMON_H_
#define AUDIT_COMMON_H_

#include <cstdint>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

#define AUDIT_CONCAT_IMPL_(a, b) a##b
#define AUDIT_CONCAT_(a, b) AUDIT_CONCAT_IMPL_(a, b)

#define AUDIT_RETURN_IF_ERROR(expr)        \
  do {                                     \
    ::absl::Status _audit_status = (expr); \
    if (!_audit_status.ok()) {             \
      return _audit_status;                \
    }                                      \
  } while (0)

#define AUDIT_ASSIGN_OR_RETURN_IMPL_(tmp, lhs, rexpr) \
  auto tmp = (rexpr);                                 \
  if (!tmp.ok()) {                                    \
    return tmp.status();                              \
  }                                                   \
  lhs = std::move(tmp).value()

#define AUDIT_ASSIGN_OR_RETURN(lhs, rexpr) \
  AUDIT_ASSIGN_OR_RETURN_IMPL_(AUDIT_CONCAT_(_audit_statusor_, __LINE__), lhs, rexpr)

namespace audit {

// Conversions between std::string_view and absl::string_view, which are
// distinct types in some abseil builds.
inline absl::string_view ToAbsl(std::string_view s) { return {s.data(), s.size()}; }
inline std::string_view ToStd(absl::string_view s) { return {s.data(), s.size()}; }

// Selects between the OpenMP kernel and the serial reference loop. Both
// produce bit-identical results; the serial path exists for testing and
// benchmarking.
enum class Execution { kSerial, kParallel };

// Sets the OpenMP worker count used by kParallel kernels. 0 keeps the
// runtime default.
void SetWorkerCount(int workers);
int WorkerCount();

// Stateless 64-bit mixer (splitmix64 finalizer).
constexpr uint64_t Mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives an independent stream seed from a master seed and a path of
// indices, e.g. DeriveSeed(seed, video, account, purpose). Streams depend
// only on the path, never on scheduling.
template <typename... Ts>
constexpr uint64_t DeriveSeed(uint64_t master, Ts... path) {
  uint64_t h = Mix64(master);
  ((h = Mix64(h ^ Mix64(static_cast<uint64_t>(path) + 0x632be59bd9b4e019ULL))), ...);
  return h;
}

}  // namespace audit

#endif  // AUDIT_COMMON_H_
