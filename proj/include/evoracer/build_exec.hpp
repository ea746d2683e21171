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

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace evoracer {

enum class LanguageTag { kCFamily, kScript };

const char* language_tag_name(LanguageTag tag);
std::optional<LanguageTag> language_tag_from_string(std::string_view text);

struct BuildRecipe {
  std::string compiler = "g++";
  std::vector<std::string> flags;
  std::vector<std::string> link_flags;
  std::vector<std::string> include_paths;
  std::vector<std::string> library_paths;
  std::vector<std::string> libraries;
  std::filesystem::path output_dir = "./bin";
  double compile_timeout = 30.0;
  LanguageTag language_tag = LanguageTag::kCFamily;

  // Stable text used for content addressing.
  std::string canonical() const;
};

// A compiled (or syntax-checked, for scripts) variant ready to execute.
struct Artifact {
  std::filesystem::path path;
  std::string hash;
  LanguageTag language_tag = LanguageTag::kCFamily;
  // Interpreter for script artifacts; empty for native executables.
  std::string interpreter;
  bool cache_hit = false;
};

struct CompileOutcome {
  bool ok = false;
  bool timed_out = false;
  std::optional<Artifact> artifact;
  std::string diagnostics;
  std::string hash;
};

// One compile attempt. Artifacts live at `<output_dir>/<hash>/` where the hash
// covers both the recipe and the source, so identical input is a cache hit.
// Throws Error(kToolMissing) when the compiler cannot be executed.
CompileOutcome compile_variant(const BuildRecipe& recipe, const std::string& source_text,
                               const std::string& variant_id);

enum class RunStatus { kOk, kNonzeroExit, kTimeout, kCrash, kUnparseableOutput };

const char* run_status_name(RunStatus status);

struct RunResult {
  RunStatus status = RunStatus::kOk;
  double cost = 0.0;
  double wall_time = 0.0;
  std::string stdout_tail;
  std::string stderr_tail;
};

// Lower-level process runner shared by compilation and execution.
struct ProcessOutcome {
  bool started = false;
  bool timed_out = false;
  bool signaled = false;
  int exit_code = -1;
  int signal = 0;
  std::string stdout_text;
  std::string stderr_text;
  double wall_time = 0.0;
  int exec_errno = 0;
};

ProcessOutcome run_process(const std::vector<std::string>& argv, double timeout_seconds,
                           std::size_t capture_limit = 1 << 20);

// Target-runner protocol:
//   <target> --instance <path> --seed <u64> --time-limit <secs> [--<name> <value>]...
// The last stdout line of the form `COST <decimal>` is the cost. The child is
// killed at time_limit + grace seconds.
RunResult execute_target(const Artifact& artifact, const std::filesystem::path& instance,
                         std::uint64_t seed, const std::vector<std::string>& param_args,
                         double time_limit, double grace = 1.0);

// Parses the last `COST <real>` line; nullopt when absent or not finite.
std::optional<double> parse_cost_line(const std::string& stdout_text);

struct PenaltyPolicy {
  double penalty_value = 1e12;
};

double penalized_cost(const RunResult& result, const PenaltyPolicy& policy);

// Runs fn(0..count-1) over at most `jobs` worker threads.
void parallel_for(std::size_t count, unsigned jobs,
                  const std::function<void(std::size_t)>& fn);

}  // namespace evoracer
