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

#include "evoracer/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "evoracer/build_exec.hpp"
#include "evoracer/error.hpp"
#include "evoracer/llm.hpp"
#include "evoracer/plugins.hpp"
#include "evoracer/run_log.hpp"
#include "evoracer/stats.hpp"
#include "evoracer/util.hpp"

namespace evoracer {
namespace {

// Hard stop for the iteration counter; the budget always ends a run long
// before this in practice.
constexpr std::uint32_t kMaxIterations = 10000;

// Stands in for the provider when code evolution is off.
class NullProvider final : public LlmProvider {
 public:
  std::string name() const override { return "none"; }
  LlmResponse attempt(const LlmRequest&) override {
    throw Error(ErrorCode::kAuthFailure, "no LLM provider configured");
  }
};

std::vector<std::uint64_t> ids_of(const std::vector<RankedConfiguration>& ranked) {
  std::vector<std::uint64_t> ids;
  for (const auto& r : ranked) ids.push_back(r.config.id);
  return ids;
}

nlohmann::json theta_json(const ParamAssignment& theta) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [name, value] : theta.values()) {
    std::visit([&](const auto& v) { j[name] = v; }, value);
  }
  return j;
}

nlohmann::json ranked_json(const ParamSpace& space, const RankedConfiguration& r) {
  return {{"id", r.config.id},
          {"variant", r.config.variant_id},
          {"iteration", r.config.iteration},
          {"theta", theta_json(r.config.theta)},
          {"args", assignment_to_string(space, r.config.theta)},
          {"mean_rank", r.mean_rank},
          {"mean_cost", r.mean_cost},
          {"cost_variance", r.cost_variance},
          {"blocks", r.blocks}};
}

std::string variant_file_name(const CodeEvolutionSpec& ces) {
  std::string ext = ces.source.source_file.extension().string();
  if (ext.empty()) ext = ces.source.language_tag == LanguageTag::kScript ? ".py" : ".cpp";
  return "winner_variant" + ext;
}

}  // namespace

std::string format_winner_line(const ParamSpace& space, const RankedConfiguration& best) {
  return assignment_to_string(space, best.config.theta);
}

std::vector<std::filesystem::path> list_instances(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw Error(ErrorCode::kFileNotFound, "instance directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    // gen-instances writes its manifest next to the instances.
    if (!entry.is_regular_file() || name.starts_with('.') || name == "manifest.json") continue;
    files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

TuningResult run_tuning(const TuningInputs& inputs, const TuningHooks& hooks) {
  const Scenario& sc = inputs.scenario;
  const ParamSpace& space = inputs.space;
  if (inputs.instances.empty()) throw Error(ErrorCode::kInvalidArgument, "no training instances");
  if (sc.code_evolution && !inputs.ces) {
    throw Error(ErrorCode::kInvalidArgument, "code evolution enabled without a configuration");
  }

  const bool write = !inputs.output_dir.empty();
  if (write) std::filesystem::create_directories(inputs.output_dir);
  JsonlLog run_log = write ? JsonlLog(inputs.output_dir / "run_log.jsonl") : JsonlLog();
  JsonlLog transcript = write ? JsonlLog(inputs.output_dir / "transcript.jsonl") : JsonlLog();

  TuningResult result;
  result.max_experiments = sc.max_experiments;
  RaceState state;
  state.max_experiments = sc.max_experiments;

  // --- Environment: the original target, the provider and the engine. ---
  const PluginRegistry plugins = PluginRegistry::with_builtin_plugins();
  std::unique_ptr<LlmProvider> owned_llm;
  LlmProvider* llm = hooks.llm;
  std::unique_ptr<EvolutionEngine> engine;
  std::string original_source;
  std::map<std::string, Artifact> artifacts;
  const bool need_source_build = sc.code_evolution || (!sc.target_runner && inputs.ces);

  if (inputs.ces && need_source_build) {
    const CodeEvolutionSpec& ces = *inputs.ces;
    try {
      original_source = read_text_file(ces.source.source_file);
    } catch (const Error& e) {
      throw Error(ErrorCode::kFatalEnvironment, e.what());
    }
    if (sc.code_evolution && llm == nullptr) {
      owned_llm = make_provider(ces.llm);
      llm = owned_llm.get();
    }
    // The engine also owns A0's compilation in plain mode; the provider is
    // never consulted there.
    static NullProvider unused_provider;
    engine = std::make_unique<EvolutionEngine>(ces, plugins.get(ces.source.language_tag),
                                               llm != nullptr ? *llm : unused_provider,
                                               result.registry, original_source, &run_log,
                                               &transcript, sc.seed ^ 0x5eedULL);
    try {
      const VariantRecord& a0 = engine->prepare_original();
      artifacts[a0.id] = *a0.artifact;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kToolMissing) throw Error(ErrorCode::kFatalEnvironment, e.what());
      throw;
    }
  } else if (sc.target_runner) {
    if (!std::filesystem::exists(*sc.target_runner)) {
      throw Error(ErrorCode::kFatalEnvironment,
                  "target runner not found: " + sc.target_runner->string());
    }
    Artifact a;
    a.path = *sc.target_runner;
    a.hash = sha256_hex(a.path.string());
    artifacts[kOriginalVariantId] = a;
  } else if (!hooks.evaluator) {
    throw Error(ErrorCode::kFatalEnvironment, "no target available");
  }

  std::mutex artifacts_mu;
  const PenaltyPolicy penalty{sc.penalty};
  Evaluator evaluator = hooks.evaluator;
  if (!evaluator) {
    evaluator = [&](const Configuration& c, const InstanceRef& inst) {
      Artifact a;
      {
        std::lock_guard<std::mutex> lock(artifacts_mu);
        a = artifacts.at(c.variant_id);
      }
      const RunResult r = execute_target(a, inst.path, inst.seed,
                                         assignment_to_args(space, c.theta), sc.run_timeout);
      return penalized_cost(r, penalty);
    };
  }

  // Smoke runs are real target executions and are charged to the budget.
  const std::filesystem::path smoke_instance =
      sc.smoke_instance ? *sc.smoke_instance : inputs.instances.front();
  SmokeRunner smoke = [&](const Artifact& a) {
    RunResult r;
    if (hooks.smoke) {
      r = hooks.smoke(a);
    } else {
      r = execute_target(a, smoke_instance, sc.seed, {}, sc.run_timeout);
    }
    ++state.experiments_used;
    run_log.append("smoke_run", {{"iteration", state.iteration},
                                 {"artifact", a.hash},
                                 {"status", run_status_name(r.status)},
                                 {"experiments_used", state.experiments_used}});
    return r;
  };

  // --- Racing loop. ---
  const InstanceStream stream(inputs.instances, sc.seed);
  CostCache cache;
  Rng rng(sc.seed);
  SamplingModel model = SamplingModel::initial(space);
  const std::uint32_t n_iter = estimated_iterations(space.size());
  const std::uint32_t ft = std::max<std::uint32_t>(1, sc.first_test);
  RaceSettings settings{ft, sc.each_test, sc.elite_capacity, sc.alpha, sc.parallel};
  std::vector<RankedConfiguration> elites;
  std::uint64_t next_id = 1;
  std::uint32_t unchanged = 0;
  result.stop_reason = "budget";

  run_log.append("run_start", {{"max_experiments", sc.max_experiments},
                               {"seed", sc.seed},
                               {"code_evolution", sc.code_evolution},
                               {"instances", inputs.instances.size()},
                               {"parameters", space.size()},
                               {"estimated_iterations", n_iter}});

  for (std::uint32_t t = 1; t <= kMaxIterations; ++t) {
    if (state.remaining() < ft) break;
    state.iteration = t;
    std::vector<Configuration> elite_configs;
    for (const auto& e : elites) elite_configs.push_back(e.config);
    const std::set<std::string> survived = survived_variants(elite_configs);

    std::set<std::string> valid_new;
    if (sc.code_evolution && engine) {
      const std::uint32_t n = sc.code_evolution_variants;
      // Smoke runs must leave room for at least two fresh configurations.
      if (state.remaining() >= n + 2ULL * ft) {
        valid_new = engine->evolve(t, n, smoke);
        for (const auto& id : valid_new) {
          artifacts[id] = *result.registry.get(id).artifact;
        }
      } else {
        run_log.append("warning", {{"iteration", t},
                                   {"message", "evolution skipped: remaining budget too small"},
                                   {"remaining", state.remaining()}});
      }
    }

    const std::uint64_t rem = state.remaining();
    std::uint64_t fresh = t == 1 ? initial_candidate_count(sc, space.size(), rem)
                                 : fresh_configuration_count(sc, space.size(), rem, elites.size());
    fresh = std::min<std::uint64_t>(fresh, rem / ft);
    if (fresh == 0) break;

    std::vector<Configuration> pool = elite_configs;
    const auto born = generate_new_configurations(survived, kOriginalVariantId, valid_new, model,
                                                  space, fresh, rng, next_id, t);
    pool.insert(pool.end(), born.begin(), born.end());
    const std::uint64_t budget = iteration_budget(rem, t, n_iter, fresh, ft);
    run_log.append("iteration_start", {{"iteration", t},
                                       {"elites", elite_configs.size()},
                                       {"fresh", fresh},
                                       {"budget", budget},
                                       {"remaining", rem},
                                       {"valid_new_variants", valid_new.size()}});

    const RaceOutcome outcome = race(pool, stream, evaluator, cache, state, budget, settings,
                                     &run_log);
    std::vector<RankedConfiguration> next = outcome.survivors;
    if (next.size() > sc.elite_capacity) next.resize(std::max<std::uint32_t>(1, sc.elite_capacity));
    if (next.empty()) break;

    IterationSummary summary;
    summary.iteration = t;
    summary.fresh = fresh;
    summary.budget = budget;
    summary.experiments_used = state.experiments_used;
    summary.blocks = outcome.blocks;
    summary.elites = ids_of(next);
    summary.valid_new_variants = valid_new.size();
    result.iterations.push_back(summary);

    nlohmann::json elite_json = nlohmann::json::array();
    for (const auto& e : next) elite_json.push_back(ranked_json(space, e));
    run_log.append("iteration_end", {{"iteration", t},
                                     {"blocks", outcome.blocks},
                                     {"experiments", outcome.experiments},
                                     {"experiments_used", state.experiments_used},
                                     {"elites", elite_json}});

    unchanged = (!elites.empty() && ids_of(elites) == ids_of(next)) ? unchanged + 1 : 0;
    elites = std::move(next);
    std::vector<ParamAssignment> thetas;
    for (const auto& e : elites) thetas.push_back(e.config.theta);
    model = update_model(model, space, thetas);
    if (unchanged >= 2 && model.spreads_at_floor(space)) {
      result.stop_reason = "converged";
      break;
    }
  }

  if (elites.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "budget too small to complete a race");
  }
  if (state.experiments_used > state.max_experiments) {
    throw Error(ErrorCode::kFatalEnvironment, "experiment budget overrun");
  }

  result.best = elites.front();
  result.elites = elites;
  result.experiments_used = state.experiments_used;
  result.winner_line = format_winner_line(space, result.best);
  if (inputs.ces && result.registry.contains(result.best.config.variant_id)) {
    result.winner_source = result.registry.get(result.best.config.variant_id).source_text;
  }
  run_log.append("run_end", {{"stop_reason", result.stop_reason},
                             {"experiments_used", state.experiments_used},
                             {"best", ranked_json(space, result.best)}});
  result.logged_executions = run_log.count("evaluation") + run_log.count("smoke_run");

  // --- Report. ---
  std::map<std::string, std::uint64_t> by_status;
  for (const auto& r : result.registry.all()) ++by_status[variant_status_name(r.status)];
  const ErrorRateRow errors = error_row_from_run_log("run", run_log.text());
  const CostReport tokens = cost_report(transcript.text(), {});
  nlohmann::json elites_json = nlohmann::json::array();
  for (const auto& e : elites) elites_json.push_back(ranked_json(space, e));
  result.report = {
      {"best", ranked_json(space, result.best)},
      {"winner_line", result.winner_line},
      {"elites", elites_json},
      {"iterations", result.iterations.size()},
      {"stop_reason", result.stop_reason},
      {"experiments_used", result.experiments_used},
      {"max_experiments", result.max_experiments},
      {"logged_executions", result.logged_executions},
      {"variants", by_status},
      {"compile_errors", errors.compile_errors},
      {"error_rate_percent", errors.error_rate_percent},
      {"llm_calls", tokens.calls},
      {"prompt_tokens", tokens.prompt_tokens},
      {"completion_tokens", tokens.completion_tokens},
  };
  result.run_log_text = run_log.text();
  result.transcript_text = transcript.text();

  if (write) {
    write_text_file(inputs.output_dir / "winner.txt",
                    result.winner_line + "\nvariant " + result.best.config.variant_id + "\n");
    if (inputs.ces && !result.winner_source.empty()) {
      write_text_file(inputs.output_dir / variant_file_name(*inputs.ces), result.winner_source);
    }
    write_text_file(inputs.output_dir / "report.json", result.report.dump(2) + "\n");
  }
  return result;
}

}  // namespace evoracer
