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

#include "audit/llm_client.h"

#include <openssl/evp.h>

#include <atomic>
#include <cstdlib>
#include <map>
#include <thread>

#include "absl/strings/str_cat.h"
#include "audit/text_io.h"
#include "httplib.h"
#include "json.hpp"

namespace audit {

namespace {

std::string GetEnv(const char* name) {
  const char* v = std::getenv(name);
  return v ? std::string(v) : std::string();
}

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

absl::StatusOr<SplitUrl> Split(std::string_view url) {
  const size_t scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) {
    return absl::InvalidArgumentError(absl::StrCat("endpoint is not a URL: ", ToAbsl(url)));
  }
  const size_t path_start = url.find('/', scheme_end + 3);
  SplitUrl out;
  out.origin = std::string(url.substr(0, path_start));
  out.path = path_start == std::string_view::npos ? "/" : std::string(url.substr(path_start));
  return out;
}

class HttpTransport : public CompletionTransport {
 public:
  absl::StatusOr<std::string> Post(const ClassifierConfig& config,
                                   const std::string& body) override {
    AUDIT_ASSIGN_OR_RETURN(SplitUrl url, Split(config.endpoint));
    httplib::Client client(url.origin);
    client.set_connection_timeout(config.request_timeout);
    client.set_read_timeout(config.request_timeout);
    client.set_write_timeout(config.request_timeout);
    httplib::Headers headers;
    if (!config.api_key.empty()) {
      headers.emplace("Authorization", absl::StrCat("Bearer ", config.api_key));
    }
    auto res = client.Post(url.path, headers, body, "application/json");
    if (!res) {
      return absl::UnavailableError(
          absl::StrCat("request failed: ", httplib::to_string(res.error())));
    }
    if (res->status == 429 || res->status >= 500) {
      return absl::UnavailableError(absl::StrCat("HTTP ", res->status));
    }
    if (res->status < 200 || res->status >= 300) {
      return absl::FailedPreconditionError(absl::StrCat("HTTP ", res->status, ": ", res->body));
    }
    return res->body;
  }
};

}  // namespace

absl::StatusOr<ClassifierConfig> ClassifierConfigFromEnv() {
  ClassifierConfig config;
  config.endpoint = GetEnv("AUDIT_LLM_ENDPOINT");
  config.api_key = GetEnv("AUDIT_LLM_KEY");
  config.model = GetEnv("AUDIT_LLM_MODEL");
  if (config.endpoint.empty()) return absl::FailedPreconditionError("AUDIT_LLM_ENDPOINT is not set");
  if (config.model.empty()) return absl::FailedPreconditionError("AUDIT_LLM_MODEL is not set");
  return config;
}

std::string BuildCompletionRequest(const ClassifierConfig& config, std::string_view prompt) {
  nlohmann::ordered_json body{
      {"model", config.model},
      {"messages", nlohmann::ordered_json::array(
                       {{{"role", "user"}, {"content", std::string(prompt)}}})},
      {"temperature", config.temperature}};
  return body.dump();
}

absl::StatusOr<std::string> ParseCompletionResponse(std::string_view body) {
  auto j = nlohmann::json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) return absl::InvalidArgumentError("response is not JSON");
  if (!j.is_object() || !j.contains("choices") || !j["choices"].is_array() ||
      j["choices"].empty()) {
    return absl::InvalidArgumentError("response has no choices");
  }
  const auto& first = j["choices"][0];
  if (!first.is_object() || !first.contains("message") || !first["message"].is_object() ||
      !first["message"].contains("content") || !first["message"]["content"].is_string()) {
    return absl::InvalidArgumentError("response has no message content");
  }
  return first["message"]["content"].get<std::string>();
}

std::string CacheKey(std::string_view model, std::string_view prompt) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  EVP_DigestUpdate(ctx, model.data(), model.size());
  const char sep = '\0';
  EVP_DigestUpdate(ctx, &sep, 1);
  EVP_DigestUpdate(ctx, prompt.data(), prompt.size());
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

std::unique_ptr<CompletionTransport> MakeHttpTransport() { return std::make_unique<HttpTransport>(); }

LlmStanceClassifier::LlmStanceClassifier(ClassifierConfig config,
                                         std::unique_ptr<CompletionTransport> transport)
    : config_(std::move(config)), transport_(std::move(transport)) {}

std::optional<std::string> LlmStanceClassifier::CacheGet(const std::string& key) {
  std::lock_guard lock(mu_);
  if (auto it = memory_cache_.find(key); it != memory_cache_.end()) {
    ++cache_hits_;
    return it->second;
  }
  if (config_.cache_dir.empty()) return std::nullopt;
  auto text = ReadFileToString(config_.cache_dir / (key + ".txt"));
  if (!text.ok()) return std::nullopt;
  ++cache_hits_;
  return *text;
}

void LlmStanceClassifier::CachePut(const std::string& key, const std::string& content) {
  std::lock_guard lock(mu_);
  memory_cache_[key] = content;
  if (config_.cache_dir.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(config_.cache_dir, ec);
  // A failed cache write only costs a future request.
  (void)WriteStringToFile(config_.cache_dir / (key + ".txt"), content);
}

absl::StatusOr<Stance> LlmStanceClassifier::Classify(std::string_view comment_text,
                                                     std::string_view description) {
  AUDIT_ASSIGN_OR_RETURN(std::string prompt, RenderPrompt(comment_text, description));
  const std::string key = CacheKey(config_.model, prompt);
  if (auto cached = CacheGet(key)) {
    if (auto label = ParseStanceResponse(*cached)) return *label;
  }

  const std::string body = BuildCompletionRequest(config_, prompt);
  absl::StatusOr<std::string> response = absl::UnavailableError("not attempted");
  auto backoff = config_.initial_backoff;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    {
      std::lock_guard lock(mu_);
      ++network_requests_;
    }
    response = transport_->Post(config_, body);
    if (response.ok() || !absl::IsUnavailable(response.status())) break;
    if (attempt < config_.max_retries) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
  }
  if (!response.ok()) return response.status();
  AUDIT_ASSIGN_OR_RETURN(std::string content, ParseCompletionResponse(*response));
  std::optional<Stance> label = ParseStanceResponse(content);
  if (!label) {
    std::lock_guard lock(mu_);
    unlabeled_.push_back({key, content});
    return absl::InvalidArgumentError(absl::StrCat("unparseable classification: ", content));
  }
  CachePut(key, content);
  return *label;
}

std::vector<absl::StatusOr<Stance>> LlmStanceClassifier::ClassifyBatch(
    const std::vector<Item>& items) {
  std::vector<absl::StatusOr<Stance>> out(items.size(), absl::UnknownError("not classified"));
  std::atomic<size_t> next{0};
  const int workers = std::max(1, std::min<int>(config_.max_in_flight, static_cast<int>(items.size())));
  std::vector<std::jthread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (size_t i = next++; i < items.size(); i = next++) {
        out[i] = Classify(items[i].comment_text, items[i].description);
      }
    });
  }
  pool.clear();  // joins
  return out;
}

CommentClassifier LlmStanceClassifier::AsCommentClassifier() {
  return [this](const CommentRecord& c, std::string_view description) {
    return Classify(c.text, description);
  };
}

int64_t LlmStanceClassifier::network_requests() const {
  std::lock_guard lock(mu_);
  return network_requests_;
}

int64_t LlmStanceClassifier::cache_hits() const {
  std::lock_guard lock(mu_);
  return cache_hits_;
}

std::vector<UnlabeledResponse> LlmStanceClassifier::unlabeled() const {
  std::lock_guard lock(mu_);
  return unlabeled_;
}

}  // namespace audit
