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

// Acceptance checks, one PASS/FAIL line each. Exit status is non-zero when
// any check fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "evoracer/build_exec.hpp"
#include "evoracer/config.hpp"
#include "evoracer/evolution.hpp"
#include "evoracer/param_space.hpp"
#include "evoracer/plugins.hpp"
#include "evoracer/session.hpp"
#include "evoracer/stats.hpp"
#include "evoracer/tuning.hpp"
#include "evoracer/util.hpp"
#include "evoracer/vsbpp/vsbpp.hpp"
#include "test_support.hpp"

namespace {

using namespace evoracer;
using testing::slurp;
using testing::TempDir;
using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void check(const char* name, const std::function<Verdict()>& fn) {
  const auto started = Clock::now();
  Verdict v;
  try {
    v = fn();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - started).count();
  std::printf("%s %s (%.1fs): %s\n", v.pass ? "PASS" : "FAIL", name, secs, v.detail.c_str());
  std::fflush(stdout);
  if (!v.pass) ++failures;
}

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

std::vector<nlohmann::json> jsonl(const std::string& text) {
  std::vector<nlohmann::json> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(nlohmann::json::parse(line));
  }
  return out;
}

Verdict config_fidelity() {
  const auto t0 = Clock::now();
  const CodeEvolutionSpec spec = parse_code_evolution(slurp(testing::data_dir() / "appendix_b.json"));
  const double secs = seconds_since(t0);
  const bool ok = spec.source.function_name == "evaluate_placement_quality" &&
                  spec.evolution.max_compilation_failures == 3 &&
                  spec.progressive_context.reduction_schedule ==
                      std::vector<double>{1.0, 0.7, 0.5, 0.3, 0.3} &&
                  spec.llm.temperature == 1.0 && secs < 1.0;
  std::ostringstream d;
  d << "function_name=" << spec.source.function_name
    << " k=" << spec.evolution.max_compilation_failures << " schedule=[";
  for (std::size_t i = 0; i < spec.progressive_context.reduction_schedule.size(); ++i) {
    d << (i ? "," : "") << spec.progressive_context.reduction_schedule[i];
  }
  d << "] temperature=" << spec.llm.temperature << " parse=" << secs * 1000 << "ms";
  return {ok, d.str()};
}

Verdict friedman_oracle() {
  const FriedmanResult a = friedman({{1, 2, 3}, {1, 2, 3}, {1, 2, 3}});
  const FriedmanResult b = friedman(CostMatrix(10, std::vector<double>{1.0, 2.0}));
  // Unanimous n×2: T = n, chi-square(1) survival = erfc(sqrt(n/2)).
  const double closed = std::erfc(std::sqrt(5.0));
  const bool ok = std::fabs(a.statistic - 6.0) < 1e-6 && std::fabs(b.statistic - 10.0) < 1e-6 &&
                  std::fabs(b.p_value - closed) < 1e-6 &&
                  std::fabs(std::round(b.p_value * 1e5) / 1e5 - 0.00157) < 1e-12;
  char d[160];
  std::snprintf(d, sizeof d, "3x3 T=%.9f; 10x2 T=%.9f p=%.7f (closed form %.7f)", a.statistic,
                b.statistic, b.p_value, closed);
  return {ok, d};
}

Verdict cost_formulas() {
  // Smallest integer c with c >= 10·sqrt(W), resp. c >= 0.1·W^1.5, by search.
  auto b2 = [](long long w) {
    long long c = 0;
    while (c * c < 100 * w) ++c;
    return c;
  };
  auto b3 = [](long long w) {
    long long c = 0;
    while (100 * c * c < w * w * w) ++c;
    return c;
  };
  int mismatches = 0;
  for (const int w : vsbpp::kCapacities) {
    mismatches += vsbpp::bin_cost(vsbpp::CostClass::kB1, w) != w;
    mismatches += vsbpp::bin_cost(vsbpp::CostClass::kB2, w) != b2(w);
    mismatches += vsbpp::bin_cost(vsbpp::CostClass::kB3, w) != b3(w);
  }
  const bool spot = vsbpp::bin_cost(vsbpp::CostClass::kB3, 70) == 59 &&
                    vsbpp::bin_cost(vsbpp::CostClass::kB2, 100) == 100;
  return {mismatches == 0 && spot,
          std::to_string(mismatches) + " mismatches over 7 capacities x 3 classes; B3(70)=" +
              std::to_string(vsbpp::bin_cost(vsbpp::CostClass::kB3, 70)) +
              " B2(100)=" + std::to_string(vsbpp::bin_cost(vsbpp::CostClass::kB2, 100))};
}

// Direct transcriptions of the two published listings.
double listing_h5(int new_bin_type, int new_load, const std::vector<int>& bin_costs,
                  const std::vector<int>& bin_capacities, int remaining_items) {
  double utilization_factor = 1.0 - (double(new_load) / bin_capacities[new_bin_type]);
  double cost_efficiency = bin_costs[new_bin_type] / (new_load + 1.0);
  double remaining_factor = (remaining_items > 0) ? 1.0 / remaining_items : 1.0;
  return cost_efficiency * (1.0 + utilization_factor) * (1.0 + remaining_factor);
}

double listing_h7(int new_bin_type, int new_load, const std::vector<int>& bin_costs,
                  const std::vector<int>& bin_capacities, int num_items, int remaining_items) {
  double base_ratio = bin_costs[new_bin_type] / (new_load + 1e-8);
  double utilization_factor = 1.0 - (new_load / (bin_capacities[new_bin_type] + 1e-8));
  double remaining_pressure = static_cast<double>(remaining_items) / (num_items + 1e-8);
  return base_ratio * (1.0 + utilization_factor * remaining_pressure);
}

Verdict heuristic_transcription() {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const auto cls = static_cast<vsbpp::CostClass>(t % 3);
    std::vector<int> caps(vsbpp::kCapacities.begin(), vsbpp::kCapacities.end());
    std::vector<int> costs;
    for (const int w : caps) costs.push_back(vsbpp::bin_cost(cls, w));
    std::vector<int> weights(std::uniform_int_distribution<int>(1, 2000)(rng), 1);
    vsbpp::PlacementContext c;
    c.bin_costs = &costs;
    c.bin_capacities = &caps;
    c.item_weights = &weights;
    c.num_items = static_cast<int>(weights.size());
    c.num_bin_types = 7;
    c.new_bin_type = std::uniform_int_distribution<int>(0, 6)(rng);
    c.new_load = std::uniform_int_distribution<int>(1, caps[c.new_bin_type])(rng);
    c.item_weight = std::uniform_int_distribution<int>(1, c.new_load)(rng);
    c.current_bin_type = t % 2 ? c.new_bin_type : -1;
    c.remaining_items = std::uniform_int_distribution<int>(0, c.num_items - 1)(rng);
    worst = std::max(worst, std::fabs(vsbpp::placement_quality(vsbpp::Heuristic::kH5, c) -
                                      listing_h5(c.new_bin_type, c.new_load, costs, caps,
                                                 c.remaining_items)));
    worst = std::max(worst, std::fabs(vsbpp::placement_quality(vsbpp::Heuristic::kH7, c) -
                                      listing_h7(c.new_bin_type, c.new_load, costs, caps,
                                                 c.num_items, c.remaining_items)));
  }
  char d[96];
  std::snprintf(d, sizeof d, "1000 contexts, max |delta| = %.3g", worst);
  return {worst < 1e-9, d};
}

Verdict parser_round_trip() {
  const auto corpus_dir = testing::source_dir() / "tests" / "corpus";
  const auto manifest = nlohmann::json::parse(slurp(corpus_dir / "manifest.json"));
  const auto registry = PluginRegistry::with_builtin_plugins();
  std::set<std::string> files;
  int failed = 0;
  for (const auto& e : manifest) {
    const auto path = corpus_dir / e.at("file").get<std::string>();
    const std::string source = slurp(path);
    const LanguageTag tag = e.at("language") == "python" ? LanguageTag::kScript : LanguageTag::kCFamily;
    const LanguagePlugin& plugin = registry.get(tag);
    std::optional<std::string> sig;
    if (e.contains("signature")) sig = e.at("signature").get<std::string>();
    const FunctionLocator loc = plugin.find_function(source, e.at("function").get<std::string>(), sig);
    if (plugin.replace_function(source, loc, loc.definition(source)) != source) ++failed;
    files.insert(std::filesystem::weakly_canonical(path).string());
  }

  // Splice H5 into the CMSA source, build it, and compare against the
  // library's own H5 on one instance.
  const std::string cmsa = slurp(testing::source_dir() / "src" / "vsbpp" / "cmsa_vsbpp.cpp");
  const LanguagePlugin& cpp = registry.get(LanguageTag::kCFamily);
  const FunctionLocator loc = cpp.find_function(cmsa, "evaluate_placement_quality");
  const std::string spliced =
      cpp.replace_function(cmsa, loc, slurp(testing::data_dir() / "mock" / "h5_function.cpp"));
  TempDir dir("accept-splice");
  BuildRecipe recipe;
  recipe.flags = {"-O", "-std=c++17", "-w"};
  recipe.include_paths = {(testing::source_dir() / "include").string()};
  recipe.output_dir = dir / "bin";
  recipe.compile_timeout = 180;
  const CompileOutcome built = compile_variant(recipe, spliced, "H5");
  bool same_cost = false;
  if (built.ok) {
    testing::spit(dir / "inst.txt",
                  vsbpp::format_instance(vsbpp::generate_instance(vsbpp::CostClass::kB2, 100, 3)));
    const std::vector<std::string> args = {"--iterations", "5"};
    const RunResult evolved = execute_target(*built.artifact, dir / "inst.txt", 9, args, 30);
    Artifact original{testing::vsbpp_target(), "", LanguageTag::kCFamily, "", false};
    std::vector<std::string> h5_args = args;
    h5_args.insert(h5_args.end(), {"--heuristic", "h5"});
    const RunResult reference = execute_target(original, dir / "inst.txt", 9, h5_args, 30);
    same_cost = evolved.status == RunStatus::kOk && reference.status == RunStatus::kOk &&
                evolved.cost == reference.cost;
  }
  std::ostringstream d;
  d << files.size() << " files / " << manifest.size() << " functions, " << failed
    << " non-identical splices; H5 splice " << (built.ok ? "compiles" : "FAILS TO COMPILE")
    << (same_cost ? ", cost equals built-in H5" : ", cost differs from built-in H5");
  return {files.size() >= 20 && failed == 0 && built.ok && same_cost, d.str()};
}

struct VsbppRun {
  TuningResult result;
  std::string original_fc;
};

// Mock-LLM CMSA lab run over generated B1 instances.
VsbppRun vsbpp_run(const std::vector<double>& schedule) {
  TempDir dir("accept-vsbpp");
  testing::VsbppScenario s;
  s.budget = 200;
  s.variants = 5;
  s.schedule = schedule;
  Session session(testing::write_vsbpp_scenario(dir.path(), s));
  session.set_output_dir(dir / "out");
  VsbppRun run;
  run.result = session.tune();
  const std::string source = slurp(testing::source_dir() / "src" / "vsbpp" / "cmsa_vsbpp.cpp");
  run.original_fc =
      find_function(source, "evaluate_placement_quality", LanguageTag::kCFamily).definition(source);
  return run;
}

const VsbppRun& main_run() {
  static const VsbppRun run = vsbpp_run({1.0, 0.7, 0.5, 0.3, 0.3});
  return run;
}

Verdict afo_invariant() {
  const VsbppRun& run = main_run();
  const std::string expected = run.original_fc + (run.original_fc.ends_with('\n') ? "" : "\n");
  int prompts = 0;
  int violations = 0;
  std::set<std::uint32_t> iterations;
  for (const auto& e : jsonl(run.result.transcript_text)) {
    if (e["event"] != "llm_response") continue;
    ++prompts;
    iterations.insert(e["iteration"].get<std::uint32_t>());
    const auto fc = extract_fc_section(e["prompt"].get<std::string>());
    if (!fc || *fc != expected) ++violations;
  }
  std::ostringstream d;
  d << prompts << " prompts over " << iterations.size() << " iterations, " << violations
    << " FC violations; experiments " << run.result.experiments_used << "/"
    << run.result.max_experiments;
  return {prompts > 0 && iterations.size() >= 2 && violations == 0, d.str()};
}

Verdict progressive_context() {
  const VsbppRun& run = main_run();
  int checked = 0;
  int over = 0;
  for (const auto& e : jsonl(run.result.run_log_text)) {
    if (e["event"] != "evolution_start" || e["iteration"].get<int>() <= 1) continue;
    ++checked;
    const double bound = e["context_ratio"].get<double>() * e["full_chars"].get<double>();
    if (e["context_chars"].get<double>() > bound) ++over;
  }

  // Aggregate at ratio 0.3 against an all-full-context counterfactual with the
  // same prompts.
  const VsbppRun low = vsbpp_run({1.0, 0.3});
  double actual = 0.0;
  double counterfactual = 0.0;
  for (const auto& e : jsonl(low.result.transcript_text)) {
    if (e["event"] != "llm_response" || e["iteration"].get<int>() <= 1) continue;
    const double prompt = e["prompt_chars"].get<double>();
    actual += prompt;
    counterfactual += prompt - e["context_chars"].get<double>() + e["full_chars"].get<double>();
  }
  const double share = counterfactual > 0 ? actual / counterfactual : 1.0;
  char d[200];
  std::snprintf(d, sizeof d,
                "%d later iterations, %d over the ratio bound; ratio-0.3 prompts = %.1f%% of "
                "full-context counterfactual",
                checked, over, 100.0 * share);
  return {checked > 0 && over == 0 && counterfactual > 0 && share <= 0.40, d};
}

Verdict compile_retry() {
  TempDir dir("accept-retry");
  testing::QuadraticScenario s;
  s.code_evolution = true;
  s.mock_script = "quadratic_broken.json";
  s.variants = 2;
  s.budget = 200;
  s.max_compilation_failures = 3;
  Session session(testing::write_quadratic_scenario(dir.path(), s));
  const TuningResult& r = session.tune();
  std::map<std::string, int> compiles;
  for (const auto& e : jsonl(r.run_log_text)) {
    if (e["event"] == "compile") ++compiles[e["variant"].get<std::string>()];
  }
  int broken = 0;
  int duplicates = 0;
  int wrong = 0;
  bool in_valid = false;
  for (const auto& rec : r.registry.all()) {
    if (rec.id == kOriginalVariantId) continue;
    // Every reply is the same broken body, so later replies in a batch are
    // deduplicated before compilation; they must never reach the compiler.
    if (rec.status == VariantStatus::kDuplicate) {
      ++duplicates;
      const bool points_at_broken =
          rec.duplicate_of && r.registry.contains(*rec.duplicate_of) &&
          r.registry.get(*rec.duplicate_of).status == VariantStatus::kCompileFailed;
      if (compiles.count(rec.id) != 0 || !points_at_broken) ++wrong;
      continue;
    }
    ++broken;
    if (rec.status != VariantStatus::kCompileFailed || rec.attempts != 3 || compiles[rec.id] != 3) {
      ++wrong;
    }
  }
  for (const auto& it : r.iterations) in_valid |= it.valid_new_variants > 0;
  for (const auto& e : r.elites) in_valid |= e.config.variant_id != kOriginalVariantId;
  std::ostringstream d;
  d << broken << " broken variants (+" << duplicates << " deduplicated), " << wrong
    << " without exactly 3 attempts; valid set "
    << (in_valid ? "NOT empty" : "empty") << "; run finished (" << r.stop_reason << ", "
    << r.experiments_used << "/" << r.max_experiments << ")";
  return {broken > 0 && wrong == 0 && !in_valid, d.str()};
}

struct PlantedStats {
  int hits = 0;
  int budget_mismatch = 0;
  double seconds = 0.0;
  std::string xs;
};

const PlantedStats& planted_runs() {
  static const PlantedStats stats = [] {
    PlantedStats s;
    const auto t0 = Clock::now();
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      TempDir dir("accept-planted");
      testing::QuadraticScenario q;
      q.seed = seed;
      q.budget = 500;
      const auto counter = dir / "count.txt";
      ::setenv("EVORACER_COUNT_FILE", counter.c_str(), 1);
      Session session(testing::write_quadratic_scenario(dir.path(), q));
      const TuningResult& r = session.tune();
      ::unsetenv("EVORACER_COUNT_FILE");
      const double x = r.best.config.theta.numeric("x");
      s.hits += std::fabs(x - 3.0) <= 0.5;
      char buf[32];
      std::snprintf(buf, sizeof buf, "%s%.3f", seed > 1 ? " " : "", x);
      s.xs += buf;
      const std::string text = std::filesystem::exists(counter) ? slurp(counter) : "";
      const auto executed = static_cast<std::uint64_t>(std::count(text.begin(), text.end(), '\n'));
      if (executed != r.logged_executions || executed != r.experiments_used || executed > 500) {
        ++s.budget_mismatch;
      }
    }
    s.seconds = seconds_since(t0);
    return s;
  }();
  return stats;
}

Verdict planted_optimum() {
  // Grid oracle of the planted objective (noise-free part).
  double best_x = -10.0;
  double best = 1e300;
  for (int i = 0; i <= 20000; ++i) {
    const double x = -10.0 + i * 0.001;
    const double v = (x - 3.0) * (x - 3.0);
    if (v < best) {
      best = v;
      best_x = x;
    }
  }
  const PlantedStats& s = planted_runs();
  char d[300];
  std::snprintf(d, sizeof d, "%d/10 within 0.5 of grid optimum %.3f in %.1fs; x = %s", s.hits,
                best_x, s.seconds, s.xs.c_str());
  return {std::fabs(best_x - 3.0) < 1e-9 && s.hits >= 8 && s.seconds < 120.0, d};
}

Verdict cmsa_properties() {
  const auto t0 = Clock::now();
  int infeasible = 0;
  int increases = 0;
  int below_optimum = 0;
  vsbpp::CmsaParams params;
  for (int cls = 0; cls < 3; ++cls) {
    for (int i = 0; i < 10; ++i) {
      const auto inst = vsbpp::generate_instance(static_cast<vsbpp::CostClass>(cls), 100,
                                                 1000 + 10 * cls + i);
      vsbpp::CmsaTrace trace;
      const auto p = vsbpp::cmsa_solve(inst, params, vsbpp::Heuristic::kDefault, i + 1, &trace);
      infeasible += !vsbpp::is_feasible(inst, p);
      for (std::size_t k = 1; k < trace.incumbent_cost.size(); ++k) {
        increases += trace.incumbent_cost[k] > trace.incumbent_cost[k - 1];
      }
    }
  }
  int micro = 0;
  for (int n = 4; n <= 12; ++n) {
    for (int cls = 0; cls < 3; ++cls) {
      const auto inst = vsbpp::generate_instance(static_cast<vsbpp::CostClass>(cls), n, 77 * n + cls);
      const auto p = vsbpp::cmsa_solve(inst, params, vsbpp::Heuristic::kDefault, n);
      infeasible += !vsbpp::is_feasible(inst, p);
      below_optimum += p.total_cost < vsbpp::exact_optimum(inst);
      ++micro;
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << "30 instances n=100: " << increases << " incumbent increases; " << micro
    << " micro-instances: " << below_optimum << " below exact optimum; " << infeasible
    << " infeasible packings; " << secs << "s";
  return {infeasible == 0 && increases == 0 && below_optimum == 0 && secs < 60.0, d.str()};
}

Verdict budget_exactness() {
  const PlantedStats& s = planted_runs();
  const TuningResult& v = main_run().result;
  const bool vsbpp_ok =
      v.logged_executions == v.experiments_used && v.experiments_used <= v.max_experiments;
  std::ostringstream d;
  d << "10 counted runs: " << s.budget_mismatch << " mismatches between executed, logged and "
    << "used (budget 500); CMSA run logged " << v.logged_executions << ", used "
    << v.experiments_used << " of " << v.max_experiments;
  return {s.budget_mismatch == 0 && vsbpp_ok, d.str()};
}

Verdict error_rate_report_check() {
  std::vector<ErrorRateRow> rows;
  std::size_t i = 0;
  for (const auto& row : testing::published_error_rows()) {
    rows.push_back(error_row_from_run_log(std::to_string(++i), testing::synthetic_run_log(row)));
  }
  const ErrorRateReport rep = error_rate_report(rows);
  const double expected[] = {13.33, 20.00, 6.66, 0.00, 0.00, 10.00, 8.00, 5.00, 2.85, 0.00};
  int row_mismatch = 0;
  for (std::size_t r = 0; r < rep.rows.size(); ++r) {
    row_mismatch += std::fabs(rep.rows[r].error_rate_percent - expected[r]) > 1e-9;
  }
  const auto& t = rep.totals;
  const bool ok = rep.rows.size() == 10 && row_mismatch == 0 && t.compile_errors == 21 &&
                  t.iterations == 63 && t.variants == 315 &&
                  std::fabs(t.error_rate_percent - 6.67) < 1e-9;
  char d[160];
  std::snprintf(d, sizeof d, "%d row mismatches; totals %llu/%llu over %llu iterations -> %.2f%%",
                row_mismatch, static_cast<unsigned long long>(t.compile_errors),
                static_cast<unsigned long long>(t.variants),
                static_cast<unsigned long long>(t.iterations), t.error_rate_percent);
  return {ok, d};
}

}  // namespace

int main() {
  check("config-fidelity", config_fidelity);
  check("friedman-oracle", friedman_oracle);
  check("cost-formulas", cost_formulas);
  check("heuristic-transcription", heuristic_transcription);
  check("parser-round-trip", parser_round_trip);
  check("afo-invariant", afo_invariant);
  check("progressive-context", progressive_context);
  check("compile-retry", compile_retry);
  check("planted-optimum", planted_optimum);
  check("cmsa-lite-properties", cmsa_properties);
  check("budget-exactness", budget_exactness);
  check("error-rate-report", error_rate_report_check);
  std::printf("%d check(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
