// Copyright 2026 The evoracer Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "evoracer/config.hpp"

namespace evoracer {

class JsonlLog;

struct LlmRequest {
  std::string model;
  std::string system_text;
  std::string user_text;
  double temperature = 1.0;
  double top_p = 0.9;
  std::uint32_t max_tokens = 2000;
  std::string request_id;
};

struct LlmResponse {
  std::string text;
  std::uint64_t prompt_tokens = 0;
  std::uint64_t completion_tokens = 0;
  double provider_latency = 0.0;
  std::uint32_t attempt = 1;
};

// ceil(1.3 × whitespace-delimited words).
std::uint64_t surrogate_token_count(std::string_view text);

class LlmProvider {
 public:
  virtual ~LlmProvider() = default;
  virtual std::string name() const = 0;
  // One attempt. Throws Error(kProviderFailure) for retryable failures and
  // Error(kAuthFailure) for credential problems.
  virtual LlmResponse attempt(const LlmRequest& request) = 0;
  // Multiplier on the retry backoff; the mock provider never sleeps.
  virtual double backoff_scale() const { return 1.0; }
};

// Scripted provider. The script is a JSON array whose entries are either a
// string or {"match": substring?, "response": text, "fail_times": n}. A
// cursor walks the entries cyclically; the first entry at or after the cursor
// whose match occurs in the request text answers. An entry with fail_times
// left fails instead (and keeps the cursor), so retries hit it again.
class MockProvider final : public LlmProvider {
 public:
  explicit MockProvider(std::string_view script_json);
  std::string name() const override { return "mock"; }
  LlmResponse attempt(const LlmRequest& request) override;
  double backoff_scale() const override { return 0.0; }

 private:
  struct Entry {
    std::string match;
    std::string response;
    std::int64_t fail_times = 0;
  };
  std::vector<Entry> entries_;
  std::size_t cursor_ = 0;
};

// Generic chat-completion endpoint. Requests carry model, messages[],
// temperature, top_p and max_tokens; both the choices[].message.content and
// content[].text response shapes are understood. The bearer credential comes
// from the environment variable named by LlmSpec::api_key_env.
std::unique_ptr<LlmProvider> make_http_provider(const LlmSpec& spec);

// Mock providers read LlmSpec::mock_script.
std::unique_ptr<LlmProvider> make_provider(const LlmSpec& spec);

struct RetryPolicy {
  std::uint32_t max_retries = 3;
  double backoff_seconds = 1.0;
};

// Up to 1 + max_retries attempts with exponential backoff. Every attempt is
// appended to `transcript` as an llm_attempt entry when given. AuthFailure is
// rethrown immediately; exhausting retries throws kProviderFailure.
LlmResponse complete(LlmProvider& provider, const LlmRequest& request, const RetryPolicy& policy,
                     JsonlLog* transcript = nullptr);

// Contents of the first fenced block mentioning `function_name` as an
// identifier. Errors: kNoCodeBlock, kSignatureAbsent.
std::string extract_code_block(std::string_view response_text, std::string_view function_name);

}  // namespace evoracer
