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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "evoracer/build_exec.hpp"

namespace evoracer {

class PluginRegistry;
class ParamSpace;

// Scenario file (`key = value`). Keys and defaults:
//
//   maxExperiments         300      target-run budget
//   codeEvolution          FALSE    empty value also means FALSE
//   codeEvolutionConfig    -        required when codeEvolution is TRUE
//   codeEvolutionVariants  5        variants per iteration
//   parameterFile          parameters.txt
//   trainInstancesDir      Instances
//   targetRunner           -        prebuilt target; otherwise A0 is compiled
//   runTimeout             150      seconds per target run
//   seed                   0
//   firstTest              5
//   eachTest               1
//   eliteCapacity          4
//   testAlpha              0.05     (or confidence = 1 - alpha)
//   parallel               1
//   penalty                1e12
//   smokeInstance          -        defaults to the first training instance
//   nbConfigurations       -        overrides the per-iteration pool size
//
// Relative paths resolve against the scenario file's directory.
struct Scenario {
  std::uint64_t max_experiments = 300;
  bool code_evolution = false;
  std::filesystem::path code_evolution_config_path;
  std::uint32_t code_evolution_variants = 5;
  std::filesystem::path param_space_path = "parameters.txt";
  std::filesystem::path instance_dir = "Instances";
  std::optional<std::filesystem::path> target_runner;
  double run_timeout = 150.0;
  std::uint64_t seed = 0;
  std::uint32_t first_test = 5;
  std::uint32_t each_test = 1;
  std::uint32_t elite_capacity = 4;
  double alpha = 0.05;
  std::uint32_t parallel = 1;
  double penalty = 1e12;
  std::optional<std::filesystem::path> smoke_instance;
  std::optional<std::uint32_t> nb_configurations;

  std::filesystem::path base_dir;
  std::vector<std::string> warnings;
};

// `overrides` are raw key=value pairs applied after the file contents, with the
// same key semantics (used by `--set`).
Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir = {},
                        const std::vector<std::pair<std::string, std::string>>& overrides = {});
Scenario load_scenario(const std::filesystem::path& path,
                       const std::vector<std::pair<std::string, std::string>>& overrides = {});

struct ProblemContext {
  std::string problem_name;
  std::string problem_description;
  std::string algorithm_approach;
  std::string optimization_objective;
  std::vector<std::string> key_challenges;
  std::string performance_considerations;
  std::string domain_knowledge;
};

struct SourceSpec {
  std::filesystem::path source_file;
  std::string function_name;
  std::string function_signature;
  LanguageTag language_tag = LanguageTag::kCFamily;
  std::string language;  // as written in language_config.language
  std::vector<std::string> includes;
  std::vector<std::string> dependencies;
};

enum class ProviderKind { kMock, kHttpGeneric };

struct LlmSpec {
  ProviderKind provider = ProviderKind::kMock;
  std::string provider_name = "mock";
  std::string model;
  double temperature = 1.0;
  double top_p = 0.9;
  std::uint32_t max_tokens = 2000;
  std::uint32_t max_retries = 3;
  double timeout = 60.0;
  std::string endpoint;
  std::string api_key_env = "EVORACER_API_KEY";
  std::filesystem::path mock_script;
  double backoff_seconds = 1.0;
  bool use_dynamic_prompting = true;
};

struct ContextSpec {
  bool enabled = true;
  bool first_iteration_full_context = true;
  std::vector<double> reduction_schedule = {1.0};
  double min_context_ratio = 0.2;
};

struct EvolutionSpec {
  std::uint32_t max_compilation_failures = 3;
  std::uint32_t ef_threshold = 3;
  bool intelligent_error_correction = true;
  std::uint32_t max_error_correction_attempts = 2;
  std::vector<std::string> available_strategies;
  std::string strategy_selection = "weighted";
  std::map<std::string, double> strategy_weights;
};

struct CodeEvolutionSpec {
  ProblemContext problem_context;
  SourceSpec source;
  BuildRecipe build;
  LlmSpec llm;
  ContextSpec progressive_context;
  EvolutionSpec evolution;

  // The document as parsed; unknown fields survive re-serialization.
  nlohmann::json document;
  std::filesystem::path base_dir;
};

// Parses the code-evolution JSON. Relative paths are resolved against
// `base_dir` when it is non-empty. Does not touch the filesystem.
CodeEvolutionSpec parse_code_evolution(std::string_view json_text,
                                       const std::filesystem::path& base_dir = {});
// Reads, parses and checks that source_file exists (Error kFileNotFound).
CodeEvolutionSpec load_code_evolution(const std::filesystem::path& path);

nlohmann::json to_json(const ProblemContext& context);
// Re-serializes typed fields over the original document.
nlohmann::json to_json(const CodeEvolutionSpec& spec);

enum class Severity { kWarning, kError };

struct ValidationIssue {
  Severity severity = Severity::kError;
  std::string field;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool has_errors() const;
  std::size_t error_count() const;
  std::string to_text() const;
};

// Cross-checks both inputs. `ces` may be null in plain racing mode; `space`
// may be null when the parameter file has not been loaded yet.
ValidationReport validate_specs(const Scenario& scenario, const CodeEvolutionSpec* ces,
                                const PluginRegistry& plugins, const ParamSpace* space = nullptr);

}  // namespace evoracer
