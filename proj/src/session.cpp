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

#include "evoracer/session.hpp"

#include "evoracer/error.hpp"
#include "evoracer/plugins.hpp"
#include "evoracer/util.hpp"

namespace evoracer {

Session::Session(std::filesystem::path scenario_path)
    : scenario_path_(std::move(scenario_path)) {}

void Session::set(const std::string& key, const std::string& value) {
  overrides_.emplace_back(key, value);
}

ValidationReport Session::validate() {
  ValidationReport report;
  auto fail = [&](std::string field, std::string message) {
    report.issues.push_back({Severity::kError, std::move(field), std::move(message)});
  };

  inputs_ = TuningInputs{};
  try {
    inputs_.scenario = load_scenario(scenario_path_, overrides_);
  } catch (const Error& e) {
    fail("scenario", std::string(error_code_name(e.code())) + ": " + e.what());
    return report;
  }
  const Scenario& sc = inputs_.scenario;

  try {
    inputs_.space = ParamSpace::parse(read_text_file(sc.param_space_path));
  } catch (const Error& e) {
    fail("parameterFile", std::string(error_code_name(e.code())) + ": " + e.what());
  }
  try {
    inputs_.instances = list_instances(sc.instance_dir);
    if (inputs_.instances.empty()) fail("trainInstancesDir", "no instance files");
  } catch (const Error& e) {
    fail("trainInstancesDir", e.what());
  }
  if (!sc.code_evolution_config_path.empty()) {
    try {
      inputs_.ces = load_code_evolution(sc.code_evolution_config_path);
    } catch (const Error& e) {
      fail("codeEvolutionConfig", std::string(error_code_name(e.code())) + ": " + e.what());
    }
  }
  if (inputs_.ces) {
    // Artifacts live with the run so that output directories are
    // self-contained.
    if (!output_dir_.empty()) inputs_.ces->build.output_dir = output_dir_ / "artifacts";
  }
  inputs_.output_dir = output_dir_;

  const PluginRegistry plugins = PluginRegistry::with_builtin_plugins();
  ValidationReport cross = validate_specs(sc, inputs_.ces ? &*inputs_.ces : nullptr, plugins,
                                          &inputs_.space);
  report.issues.insert(report.issues.end(), cross.issues.begin(), cross.issues.end());
  return report;
}

const TuningResult& Session::tune(const TuningHooks& hooks) {
  const ValidationReport report = validate();
  if (report.has_errors()) throw Error(ErrorCode::kValidationFailed, report.to_text());
  result_ = run_tuning(inputs_, hooks);
  return *result_;
}

}  // namespace evoracer
