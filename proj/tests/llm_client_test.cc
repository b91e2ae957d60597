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

#include <atomic>
#include <thread>

#include "gtest/gtest.h"
#include "httplib.h"
#include "json.hpp"

namespace audit {
namespace {

// Local chat-completions server. Replies with `reply`, after failing the
// first `fail_first` requests with 503.
class FakeServer {
 public:
  explicit FakeServer(std::string reply, int fail_first = 0)
      : reply_(std::move(reply)), fail_first_(fail_first) {
    server_.Post("/v1/chat", [this](const httplib::Request& req, httplib::Response& res) {
      const int n = ++requests_;
      last_body_ = req.body;
      last_auth_ = req.get_header_value("Authorization");
      if (n <= fail_first_) {
        res.status = 503;
        return;
      }
      nlohmann::json body{{"choices", {{{"message", {{"role", "assistant"}, {"content", reply_}}}}}}};
      res.set_content(body.dump(), "application/json");
    });
    server_.Post("/v1/bad", [](const httplib::Request&, httplib::Response& res) {
      res.status = 400;
      res.set_content("bad request", "text/plain");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeServer() {
    server_.stop();
    thread_.join();
  }

  ClassifierConfig Config(const std::string& path = "/v1/chat") const {
    ClassifierConfig c;
    c.endpoint = "http://127.0.0.1:" + std::to_string(port_) + path;
    c.model = "test-model";
    c.api_key = "secret";
    c.initial_backoff = std::chrono::milliseconds(1);
    c.request_timeout = std::chrono::seconds(5);
    return c;
  }
  int requests() const { return requests_; }
  std::string last_body() const { return last_body_; }
  std::string last_auth() const { return last_auth_; }

 private:
  httplib::Server server_;
  std::thread thread_;
  std::string reply_;
  int fail_first_;
  int port_ = 0;
  std::atomic<int> requests_{0};
  std::string last_body_, last_auth_;
};

std::filesystem::path FreshDir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("audit_llm_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

TEST(LlmClientTest, CacheKeyIsSha256OfModelNulPrompt) {
  EXPECT_EQ(CacheKey("gpt-4o", "hello"), "b4be809097c27e289080a8624bc41634fc4828979ae95d2c52e30bce0e1dc39b");
  EXPECT_EQ(CacheKey("", ""), "6e340b9cffb37a989ca544e6bb780a2c78901d3fb33738768511a30617afa01d");
  EXPECT_NE(CacheKey("a", "bc"), CacheKey("ab", "c"));
}

TEST(LlmClientTest, RequestAndResponseFormat) {
  ClassifierConfig c;
  c.model = "m";
  auto body = nlohmann::json::parse(BuildCompletionRequest(c, "say \"hi\""));
  EXPECT_EQ(body["model"], "m");
  EXPECT_EQ(body["messages"][0]["role"], "user");
  EXPECT_EQ(body["messages"][0]["content"], "say \"hi\"");
  EXPECT_EQ(body["temperature"], 0.0);

  EXPECT_EQ(*ParseCompletionResponse(R"({"choices":[{"message":{"content":"Neutral"}}]})"), "Neutral");
  EXPECT_FALSE(ParseCompletionResponse("not json").ok());
  EXPECT_FALSE(ParseCompletionResponse(R"({"choices":[]})").ok());
  EXPECT_FALSE(ParseCompletionResponse(R"({"choices":[{"message":{}}]})").ok());
}

TEST(LlmClientTest, ConfigFromEnv) {
  unsetenv("AUDIT_LLM_ENDPOINT");
  EXPECT_EQ(ClassifierConfigFromEnv().status().code(), absl::StatusCode::kFailedPrecondition);
  setenv("AUDIT_LLM_ENDPOINT", "http://localhost:1/x", 1);
  setenv("AUDIT_LLM_MODEL", "m", 1);
  setenv("AUDIT_LLM_KEY", "k", 1);
  auto c = ClassifierConfigFromEnv();
  ASSERT_TRUE(c.ok());
  EXPECT_EQ(c->endpoint, "http://localhost:1/x");
  EXPECT_EQ(c->api_key, "k");
  unsetenv("AUDIT_LLM_ENDPOINT");
  unsetenv("AUDIT_LLM_MODEL");
  unsetenv("AUDIT_LLM_KEY");
}

TEST(LlmClientTest, ClassifiesAndCachesToDisk) {
  FakeServer server("Pro-Republican");
  ClassifierConfig config = server.Config();
  config.cache_dir = FreshDir("cache");
  {
    LlmStanceClassifier classifier(config, MakeHttpTransport());
    EXPECT_EQ(*classifier.Classify("maga", "rally"), Stance::kProRepublican);
    EXPECT_EQ(*classifier.Classify("maga", "rally"), Stance::kProRepublican);
    EXPECT_EQ(classifier.network_requests(), 1);
    EXPECT_EQ(classifier.cache_hits(), 1);
  }
  EXPECT_EQ(server.requests(), 1);
  EXPECT_EQ(server.last_auth(), "Bearer secret");
  auto sent = nlohmann::json::parse(server.last_body());
  EXPECT_EQ(sent["messages"][0]["content"], *RenderPrompt("maga", "rally"));
  EXPECT_TRUE(std::filesystem::exists(config.cache_dir / (CacheKey("test-model", *RenderPrompt("maga", "rally")) + ".txt")));

  // A new client reads the disk cache without touching the network.
  LlmStanceClassifier second(config, MakeHttpTransport());
  EXPECT_EQ(*second.Classify("maga", "rally"), Stance::kProRepublican);
  EXPECT_EQ(second.network_requests(), 0);
  EXPECT_EQ(server.requests(), 1);
}

TEST(LlmClientTest, RetriesUnavailable) {
  FakeServer server("Neutral", /*fail_first=*/2);
  LlmStanceClassifier classifier(server.Config(), MakeHttpTransport());
  EXPECT_EQ(*classifier.Classify("hello", ""), Stance::kNeutral);
  EXPECT_EQ(server.requests(), 3);
  EXPECT_EQ(classifier.network_requests(), 3);
}

TEST(LlmClientTest, GivesUpAfterMaxRetries) {
  FakeServer server("Neutral", /*fail_first=*/100);
  ClassifierConfig config = server.Config();
  config.max_retries = 2;
  LlmStanceClassifier classifier(config, MakeHttpTransport());
  auto r = classifier.Classify("hello", "");
  EXPECT_EQ(r.status().code(), absl::StatusCode::kUnavailable);
  EXPECT_EQ(server.requests(), 3);
}

TEST(LlmClientTest, ClientErrorsAreNotRetried) {
  FakeServer server("Neutral");
  LlmStanceClassifier classifier(server.Config("/v1/bad"), MakeHttpTransport());
  EXPECT_EQ(classifier.Classify("hello", "").status().code(), absl::StatusCode::kFailedPrecondition);
  EXPECT_EQ(classifier.network_requests(), 1);
}

TEST(LlmClientTest, UnparseableReplyIsRecordedNotCached) {
  FakeServer server("I would rather not say");
  ClassifierConfig config = server.Config();
  config.cache_dir = FreshDir("unparseable");
  LlmStanceClassifier classifier(config, MakeHttpTransport());
  EXPECT_FALSE(classifier.Classify("hmm", "").ok());
  EXPECT_FALSE(classifier.Classify("hmm", "").ok());
  EXPECT_EQ(server.requests(), 2);
  ASSERT_EQ(classifier.unlabeled().size(), 2u);
  EXPECT_EQ(classifier.unlabeled()[0].raw, "I would rather not say");
  EXPECT_FALSE(std::filesystem::exists(config.cache_dir));
}

TEST(LlmClientTest, BatchAlignsWithItems) {
  FakeServer server("Anti-Democrat");
  ClassifierConfig config = server.Config();
  config.max_in_flight = 3;
  LlmStanceClassifier classifier(config, MakeHttpTransport());
  std::vector<LlmStanceClassifier::Item> items;
  for (int i = 0; i < 10; ++i) items.push_back({"comment " + std::to_string(i), "d"});
  items.push_back({"", "d"});  // rejected before any request
  auto out = classifier.ClassifyBatch(items);
  ASSERT_EQ(out.size(), 11u);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(*out[static_cast<size_t>(i)], Stance::kAntiDemocrat);
  EXPECT_FALSE(out[10].ok());
  EXPECT_EQ(server.requests(), 10);
}

TEST(LlmClientTest, UnreachableEndpointIsUnavailable) {
  ClassifierConfig config;
  config.endpoint = "http://127.0.0.1:1/v1/chat";
  config.model = "m";
  config.max_retries = 1;
  config.initial_backoff = std::chrono::milliseconds(1);
  LlmStanceClassifier classifier(config, MakeHttpTransport());
  EXPECT_EQ(classifier.Classify("x", "").status().code(), absl::StatusCode::kUnavailable);
  EXPECT_EQ(classifier.network_requests(), 2);
}

}  // namespace
}  // namespace audit
