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
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "evoracer/config.hpp"
#include "evoracer/evolution.hpp"
#include "evoracer/param_space.hpp"
#include "evoracer/racing.hpp"

namespace evoracer {

class LlmProvider;

struct TuningInputs {
  Scenario scenario;
  ParamSpace space;
  std::optional<CodeEvolutionSpec> ces;
  std::vector<std::filesystem::path> instances;  // sorted training set
  // Empty: logs stay in memory and nothing is written.
  std::filesystem::path output_dir;
};

// Test seams. Unset members fall back to the real process-backed behaviour.
struct TuningHooks {
  Evaluator evaluator;
  SmokeRunner smoke;
  LlmProvider* llm = nullptr;
};

struct IterationSummary {
  std::uint32_t iteration = 0;
  std::uint64_t fresh = 0;
  std::uint64_t budget = 0;
  std::uint64_t experiments_used = 0;  // cumulative, after the race
  std::size_t blocks = 0;
  std::vector<std::uint64_t> elites;   // best first
  std::size_t valid_new_variants = 0;
};

struct TuningResult {
  RankedConfiguration best;
  std::string winner_line;
  std::string winner_source;  // empty without a code-evolution spec
  std::uint64_t experiments_used = 0;
  std::uint64_t logged_executions = 0;  // evaluation + smoke_run events
  std::uint64_t max_experiments = 0;
  std::vector<IterationSummary> iterations;
  std::vector<RankedConfiguration> elites;
  VariantRegistry registry;
  std::string stop_reason;  // "budget" | "converged"
  std::string run_log_text;
  std::string transcript_text;
  nlohmann::json report;
};

// Iterated racing over (θ, variant) configurations. Per iteration: survived
// variants of the elites, variant generation and validation (code evolution
// only), fresh configurations, one race over elites ∪ fresh, elite selection
// and a model update. Stops when the remaining budget cannot seat a race or
// when the elites and the model have converged.
//
// Throws kFatalEnvironment before the loop when the original target cannot be
// built; target failures inside the loop are penalized costs.
TuningResult run_tuning(const TuningInputs& inputs, const TuningHooks& hooks = {});

// The winning parameter line (`--name value` pairs). winner.txt holds this
// line followed by `variant <id>`.
std::string format_winner_line(const ParamSpace& space, const RankedConfiguration& best);

// Regular files of `dir`, sorted by name; hidden files and manifest.json are
// skipped.
std::vector<std::filesystem::path> list_instances(const std::filesystem::path& dir);

}  // namespace evoracer
