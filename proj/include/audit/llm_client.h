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

#ifndef AUDIT_LLM_CLIENT_H_
#define AUDIT_LLM_CLIENT_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "audit/common.h"
#include "audit/stance.h"

namespace audit {

struct ClassifierConfig {
  std::string endpoint;  // full URL of a chat-completions style endpoint
  std::string api_key;   // sent as "Authorization: Bearer <key>" when set
  std::string model;
  double temperature = 0.0;
  int max_retries = 3;
  std::chrono::milliseconds initial_backoff{500};
  std::filesystem::path cache_dir;  // empty disables the disk cache
  std::chrono::seconds request_timeout{60};
  int max_in_flight = 4;
};

// Reads AUDIT_LLM_ENDPOINT, AUDIT_LLM_KEY and AUDIT_LLM_MODEL. Fails when the
// endpoint or model is unset.
absl::StatusOr<ClassifierConfig> ClassifierConfigFromEnv();

// Request body: {"model", "messages": [{"role": "user", "content": prompt}],
// "temperature"}.
std::string BuildCompletionRequest(const ClassifierConfig& config, std::string_view prompt);

// Content of the first message: choices[0].message.content.
absl::StatusOr<std::string> ParseCompletionResponse(std::string_view body);

// Lowercase hex SHA-256 of model id, a NUL separator, and the prompt.
std::string CacheKey(std::string_view model, std::string_view prompt);

// One HTTP round trip. Returns the response body for 2xx, kUnavailable for
// transport failures, 429 and 5xx (retryable), and kFailedPrecondition for
// other statuses.
class CompletionTransport {
 public:
  virtual ~CompletionTransport() = default;
  virtual absl::StatusOr<std::string> Post(const ClassifierConfig& config,
                                           const std::string& body) = 0;
};

std::unique_ptr<CompletionTransport> MakeHttpTransport();

struct UnlabeledResponse {
  std::string cache_key;
  std::string raw;
};

class LlmStanceClassifier {
 public:
  LlmStanceClassifier(ClassifierConfig config, std::unique_ptr<CompletionTransport> transport);

  // Cache first; on a miss, posts with retry and exponential backoff and
  // writes the raw content through to the cache once it parses.
  absl::StatusOr<Stance> Classify(std::string_view comment_text, std::string_view description);

  struct Item {
    std::string comment_text;
    std::string description;
  };
  // Up to config.max_in_flight concurrent requests; results align with items.
  std::vector<absl::StatusOr<Stance>> ClassifyBatch(const std::vector<Item>& items);

  CommentClassifier AsCommentClassifier();

  int64_t network_requests() const;
  int64_t cache_hits() const;
  std::vector<UnlabeledResponse> unlabeled() const;

 private:
  std::optional<std::string> CacheGet(const std::string& key);
  void CachePut(const std::string& key, const std::string& content);

  ClassifierConfig config_;
  std::unique_ptr<CompletionTransport> transport_;
  mutable std::mutex mu_;  // guards the caches, counters and unlabeled_
  std::map<std::string, std::string> memory_cache_;
  int64_t network_requests_ = 0;
  int64_t cache_hits_ = 0;
  std::vector<UnlabeledResponse> unlabeled_;
};

}  // namespace audit

#endif  // AUDIT_LLM_CLIENT_H_
