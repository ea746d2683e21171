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
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "evoracer/build_exec.hpp"
#include "evoracer/config.hpp"
#include "evoracer/plugins.hpp"

namespace evoracer {

class JsonlLog;
class LlmProvider;

enum class VariantStatus { kOriginal, kUnvalidated, kValid, kCompileFailed, kRuntimePenalized, kDuplicate };

const char* variant_status_name(VariantStatus status);

struct VariantRecord {
  std::string id;
  std::uint32_t iteration = 0;  // 0 for the original
  std::string prompt_id;
  std::string source_text;    // whole file after the splice
  std::string function_text;  // the spliced definition
  VariantStatus status = VariantStatus::kUnvalidated;
  std::uint32_t attempts = 0;  // compile attempts
  std::optional<std::string> duplicate_of;
  std::optional<Artifact> artifact;
  std::string diagnostics;     // last compiler/extraction failure
  std::uint64_t prompt_tokens = 0;
  std::uint64_t completion_tokens = 0;
};

// Append-only: ids are never reused.
class VariantRegistry {
 public:
  const VariantRecord& add(VariantRecord record);
  const VariantRecord& get(const std::string& id) const;
  VariantRecord& mutable_get(const std::string& id);
  bool contains(const std::string& id) const { return index_.contains(id); }
  const std::vector<VariantRecord>& all() const { return records_; }
  // Id of a registered Original/Valid/Unvalidated record whose definition
  // matches after whitespace normalization.
  std::optional<std::string> find_equivalent(const std::string& function_text) const;

 private:
  std::vector<VariantRecord> records_;
  std::map<std::string, std::size_t> index_;
};

enum class EvolutionFocus { kStandard, kAggressive };

const char* focus_name(EvolutionFocus focus);

// Aggressive from iteration ef_threshold on.
EvolutionFocus evolution_focus(std::uint32_t iteration, std::uint32_t ef_threshold);

// Fraction of the full source allowed at iteration i (1-based): 1 at i = 1,
// then schedule[min(i, len) − 1] clamped below by min_context_ratio and never
// above the previous iteration's ratio.
double context_ratio(std::uint32_t iteration, const ContextSpec& spec);

struct ContextWindow {
  std::string text;
  double ratio = 1.0;
  std::size_t full_size = 0;
  std::size_t limit = 0;  // floor(ratio × full_size)
  bool fallback = false;  // locator failed; full source used
};

// i = 1 (or progressive context disabled): the full source. Later: file
// preamble, namespace-scope declarations and call-site snippets, cut at line
// granularity to at most floor(ratio × |source|) characters.
ContextWindow context_window(std::uint32_t iteration, const std::string& full_source,
                             const ContextSpec& spec, const LanguagePlugin& plugin,
                             const std::optional<FunctionLocator>& locator);

struct PromptSpec {
  std::uint32_t iteration = 1;
  std::string fc;  // full original definition
  EvolutionFocus focus = EvolutionFocus::kStandard;
  std::string context_fragment;
  ProblemContext problem_context;
  double temperature = 1.0;
  double top_p = 0.9;
  std::string strategy;
  std::string function_name;
  std::string function_signature;
  std::string fence_language = "cpp";
  // Retry prompts only.
  std::string diagnostics;
  std::string failed_attempt;
};

struct RenderedPrompt {
  std::string system_text;
  std::string user_text;
};

inline constexpr const char* kOriginalFunctionHeading = "## Original function";

// Sections in fixed order: problem context, evolution focus, strategy, code
// context, original function, [previous attempt diagnostics], output format.
RenderedPrompt build_prompt(const PromptSpec& spec);

// The fenced block under "## Original function"; nullopt when absent.
std::optional<std::string> extract_fc_section(const std::string& prompt_text);

using SmokeRunner = std::function<RunResult(const Artifact&)>;

// Generates and validates variants for one run. Every prompt is built from
// the original definition (never from an evolved one).
class EvolutionEngine {
 public:
  EvolutionEngine(const CodeEvolutionSpec& spec, const LanguagePlugin& plugin, LlmProvider& llm,
                  VariantRegistry& registry, std::string original_source,
                  JsonlLog* run_log = nullptr, JsonlLog* transcript = nullptr,
                  std::uint64_t seed = 0);

  // Registers and compiles A0. Throws kFatalEnvironment when it does not
  // build.
  const VariantRecord& prepare_original();

  PromptSpec prompt_spec(std::uint32_t iteration) const;
  ContextWindow window(std::uint32_t iteration) const;

  // n LLM calls; returns ids of the new non-duplicate records
  // (Unvalidated). Provider failures shrink the batch and are logged.
  std::vector<std::string> generate(std::uint32_t iteration, std::uint32_t n);

  // Compiles each record with up to k attempts (re-prompting between
  // attempts) and smoke-runs the successes. Returns the Valid ids.
  std::set<std::string> validate(std::uint32_t iteration, const std::vector<std::string>& ids,
                                 const SmokeRunner& smoke);

  std::set<std::string> evolve(std::uint32_t iteration, std::uint32_t n, const SmokeRunner& smoke);

  const FunctionLocator& locator() const { return locator_; }
  const std::string& original_definition() const { return fc_; }

 private:
  struct Completion {
    bool ok = false;
    std::string text;
  };
  Completion ask(std::uint32_t iteration, const std::string& variant_id, const std::string& purpose,
                 const PromptSpec& prompt);
  // Extracts and splices; on failure returns the reason.
  std::optional<std::string> absorb(VariantRecord& record, const std::string& response);
  std::string pick_strategy();
  void log_variant(const VariantRecord& record);

  const CodeEvolutionSpec& spec_;
  const LanguagePlugin& plugin_;
  LlmProvider& llm_;
  VariantRegistry& registry_;
  std::string source_;
  FunctionLocator locator_;
  std::string fc_;
  JsonlLog* run_log_;
  JsonlLog* transcript_;
  std::mt19937_64 rng_;
  std::uint64_t request_counter_ = 0;
  std::map<std::uint32_t, std::uint32_t> slots_;
  std::pair<std::uint64_t, std::uint64_t> pending_tokens_{0, 0};
};

}  // namespace evoracer
