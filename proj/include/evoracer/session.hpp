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

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "evoracer/config.hpp"
#include "evoracer/param_space.hpp"
#include "evoracer/tuning.hpp"

namespace evoracer {

// One scenario from files to results: loads the scenario, the parameter file,
// the code-evolution configuration and the instance list, validates them
// together and runs the tuner.
class Session {
 public:
  explicit Session(std::filesystem::path scenario_path);

  // Scenario override, same semantics as a line of the scenario file.
  void set(const std::string& key, const std::string& value);
  void set_output_dir(std::filesystem::path dir) { output_dir_ = std::move(dir); }
  const std::filesystem::path& output_dir() const { return output_dir_; }

  // Loads everything and cross-checks it. Load failures are reported as
  // issues rather than thrown.
  ValidationReport validate();

  // Throws Error(kValidationFailed) when validate() reports errors.
  const TuningResult& tune(const TuningHooks& hooks = {});

  const std::optional<TuningResult>& result() const { return result_; }
  const TuningInputs& inputs() const { return inputs_; }

 private:
  std::filesystem::path scenario_path_;
  std::vector<std::pair<std::string, std::string>> overrides_;
  std::filesystem::path output_dir_;
  TuningInputs inputs_;
  std::optional<TuningResult> result_;
};

}  // namespace evoracer
