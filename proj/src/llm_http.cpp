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

// HTTP chat-completion provider over cpp-httplib.

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <chrono>
#include <cstdlib>

#include <nlohmann/json.hpp>

#include "evoracer/error.hpp"
#include "evoracer/llm.hpp"

namespace evoracer {
namespace {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Endpoint split_endpoint(const std::string& url) {
  const std::size_t scheme = url.find("://");
  if (scheme == std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument, "endpoint needs a scheme: " + url);
  }
  const std::size_t slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

class HttpProvider final : public LlmProvider {
 public:
  explicit HttpProvider(const LlmSpec& spec) : spec_(spec), endpoint_(split_endpoint(spec.endpoint)) {}

  std::string name() const override { return spec_.provider_name; }

  LlmResponse attempt(const LlmRequest& request) override {
    const bool anthropic_style = spec_.provider_name == "anthropic";
    nlohmann::json body = {{"model", request.model},
                           {"temperature", request.temperature},
                           {"top_p", request.top_p},
                           {"max_tokens", request.max_tokens}};
    nlohmann::json messages = nlohmann::json::array();
    if (anthropic_style) {
      if (!request.system_text.empty()) body["system"] = request.system_text;
    } else if (!request.system_text.empty()) {
      messages.push_back({{"role", "system"}, {"content", request.system_text}});
    }
    messages.push_back({{"role", "user"}, {"content", request.user_text}});
    body["messages"] = std::move(messages);

    httplib::Headers headers;
    if (const char* key = std::getenv(spec_.api_key_env.c_str()); key != nullptr && *key != '\0') {
      headers.emplace("Authorization", std::string("Bearer ") + key);
      if (anthropic_style) headers.emplace("x-api-key", key);
    }
    if (anthropic_style) headers.emplace("anthropic-version", "2023-06-01");

    httplib::Client client(endpoint_.origin);
    const auto timeout = std::chrono::duration<double>(spec_.timeout);
    client.set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    client.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    client.set_write_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));

    const auto started = std::chrono::steady_clock::now();
    const auto res = client.Post(endpoint_.path, headers, body.dump(), "application/json");
    const double latency =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    if (!res) {
      throw Error(ErrorCode::kProviderFailure,
                  "transport error: " + httplib::to_string(res.error()));
    }
    if (res->status == 401 || res->status == 403) {
      throw Error(ErrorCode::kAuthFailure, "endpoint rejected credentials (HTTP " +
                                               std::to_string(res->status) + ")");
    }
    if (res->status >= 500 || res->status == 429) {
      throw Error(ErrorCode::kProviderFailure, "HTTP " + std::to_string(res->status));
    }
    if (res->status != 200) {
      throw Error(ErrorCode::kProviderFailure,
                  "HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200));
    }
    return parse_response(res->body, request, latency);
  }

 private:
  static LlmResponse parse_response(const std::string& text, const LlmRequest& request,
                                    double latency) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kProviderFailure, std::string("unparseable response: ") + e.what());
    }
    LlmResponse r;
    r.provider_latency = latency;
    if (j.contains("choices") && j["choices"].is_array() && !j["choices"].empty()) {
      r.text = j["choices"][0].value("/message/content"_json_pointer, std::string());
    } else if (j.contains("content") && j["content"].is_array()) {
      for (const auto& part : j["content"]) {
        if (part.value("type", "text") == "text") r.text += part.value("text", "");
      }
    } else {
      throw Error(ErrorCode::kProviderFailure, "response has neither choices nor content");
    }
    const nlohmann::json usage = j.value("usage", nlohmann::json::object());
    r.prompt_tokens = usage.value("prompt_tokens", usage.value("input_tokens", std::uint64_t{0}));
    r.completion_tokens =
        usage.value("completion_tokens", usage.value("output_tokens", std::uint64_t{0}));
    if (r.prompt_tokens == 0 && r.completion_tokens == 0) {
      r.prompt_tokens =
          surrogate_token_count(request.system_text) + surrogate_token_count(request.user_text);
      r.completion_tokens = surrogate_token_count(r.text);
    }
    return r;
  }

  LlmSpec spec_;
  Endpoint endpoint_;
};

}  // namespace

std::unique_ptr<LlmProvider> make_http_provider(const LlmSpec& spec) {
  return std::make_unique<HttpProvider>(spec);
}

}  // namespace evoracer
