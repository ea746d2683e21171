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

#include "evoracer/llm.hpp"

#include <chrono>
#include <cmath>
#include <thread>

#include <nlohmann/json.hpp>

#include "evoracer/error.hpp"
#include "evoracer/run_log.hpp"
#include "evoracer/util.hpp"

namespace evoracer {

std::uint64_t surrogate_token_count(std::string_view text) {
  std::uint64_t words = 0;
  bool in_word = false;
  for (const char c : text) {
    const bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
    if (!space && !in_word) ++words;
    in_word = !space;
  }
  return (words * 13 + 9) / 10;
}

MockProvider::MockProvider(std::string_view script_json) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(script_json);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedInput, std::string("mock script: ") + e.what());
  }
  if (!j.is_array()) throw Error(ErrorCode::kSchemaViolation, "mock script: expected array");
  for (const auto& item : j) {
    Entry e;
    if (item.is_string()) {
      e.response = item.get<std::string>();
    } else if (item.is_object() && item.contains("response") && item["response"].is_string()) {
      e.response = item["response"].get<std::string>();
      if (item.contains("match")) e.match = item["match"].get<std::string>();
      e.fail_times = item.value("fail_times", std::int64_t{0});
    } else {
      throw Error(ErrorCode::kSchemaViolation, "mock script: entry needs a response string");
    }
    entries_.push_back(std::move(e));
  }
  if (entries_.empty()) throw Error(ErrorCode::kSchemaViolation, "mock script: empty");
}

LlmResponse MockProvider::attempt(const LlmRequest& request) {
  const std::string haystack = request.system_text + "\n" + request.user_text;
  for (std::size_t step = 0; step < entries_.size(); ++step) {
    const std::size_t idx = (cursor_ + step) % entries_.size();
    Entry& e = entries_[idx];
    if (!e.match.empty() && haystack.find(e.match) == std::string::npos) continue;
    if (e.fail_times > 0) {
      --e.fail_times;
      cursor_ = idx;
      throw Error(ErrorCode::kProviderFailure, "scripted failure");
    }
    cursor_ = (idx + 1) % entries_.size();
    LlmResponse r;
    r.text = e.response;
    r.prompt_tokens = surrogate_token_count(request.system_text) +
                      surrogate_token_count(request.user_text);
    r.completion_tokens = surrogate_token_count(e.response);
    return r;
  }
  throw Error(ErrorCode::kProviderFailure, "no scripted response matches the request");
}

std::unique_ptr<LlmProvider> make_provider(const LlmSpec& spec) {
  if (spec.provider == ProviderKind::kMock) {
    return std::make_unique<MockProvider>(read_text_file(spec.mock_script));
  }
  return make_http_provider(spec);
}

LlmResponse complete(LlmProvider& provider, const LlmRequest& request, const RetryPolicy& policy,
                     JsonlLog* transcript) {
  const std::uint32_t attempts = 1 + policy.max_retries;
  std::string last_error;
  for (std::uint32_t a = 1; a <= attempts; ++a) {
    try {
      LlmResponse r = provider.attempt(request);
      r.attempt = a;
      if (transcript != nullptr) {
        transcript->append("llm_attempt",
                           {{"request_id", request.request_id}, {"attempt", a}, {"ok", true}});
      }
      return r;
    } catch (const Error& e) {
      if (transcript != nullptr) {
        transcript->append("llm_attempt", {{"request_id", request.request_id},
                                           {"attempt", a},
                                           {"ok", false},
                                           {"error", error_code_name(e.code())},
                                           {"message", e.what()}});
      }
      if (e.code() == ErrorCode::kAuthFailure) throw;
      if (e.code() != ErrorCode::kProviderFailure) throw;
      last_error = e.what();
    }
    if (a < attempts) {
      const double wait = policy.backoff_seconds * provider.backoff_scale() * std::ldexp(1.0, a - 1);
      if (wait > 0) std::this_thread::sleep_for(std::chrono::duration<double>(wait));
    }
  }
  throw Error(ErrorCode::kProviderFailure, "provider " + provider.name() + " failed after " +
                                               std::to_string(attempts) +
                                               " attempts: " + last_error);
}

namespace {
bool mentions_identifier(std::string_view text, std::string_view name) {
  auto ident = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
  std::size_t pos = 0;
  while ((pos = text.find(name, pos)) != std::string_view::npos) {
    const std::size_t end = pos + name.size();
    if ((pos == 0 || !ident(text[pos - 1])) && (end >= text.size() || !ident(text[end]))) {
      return true;
    }
    pos = end;
  }
  return false;
}
}  // namespace

std::string extract_code_block(std::string_view response_text, std::string_view function_name) {
  const auto lines = split_lines(response_text);
  bool any_block = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (!trim(lines[i]).starts_with("```")) continue;
    std::size_t j = i + 1;
    std::string body;
    while (j < lines.size() && !trim(lines[j]).starts_with("```")) {
      body += lines[j];
      body += '\n';
      ++j;
    }
    if (j >= lines.size()) break;  // unterminated fence
    any_block = true;
    if (mentions_identifier(body, function_name)) return body;
    i = j;
  }
  if (!any_block) throw Error(ErrorCode::kNoCodeBlock, "response contains no fenced code block");
  throw Error(ErrorCode::kSignatureAbsent,
              "no code block mentions '" + std::string(function_name) + "'");
}

}  // namespace evoracer
