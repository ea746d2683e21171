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

#include <gtest/gtest.h>

#include <cstdlib>

#include "evoracer/error.hpp"
#include "evoracer/session.hpp"
#include "evoracer/tuning.hpp"
#include "test_support.hpp"

namespace evoracer {
namespace {

using testing::QuadraticScenario;
using testing::TempDir;

double winner_x(const TuningResult& r) { return r.best.config.theta.numeric("x"); }

std::size_t count_lines(const std::filesystem::path& p) {
  if (!std::filesystem::exists(p)) return 0;
  const std::string text = testing::slurp(p);
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

TEST(Tuning, PlantedOptimumWithRealTarget) {
  TempDir dir("tune-quad");
  const auto scenario = testing::write_quadratic_scenario(dir.path(), QuadraticScenario{});
  const auto counter = dir / "count.txt";
  ::setenv("EVORACER_COUNT_FILE", counter.c_str(), 1);
  Session session(scenario);
  session.set_output_dir(dir / "out");
  const TuningResult& r = session.tune();
  ::unsetenv("EVORACER_COUNT_FILE");

  EXPECT_NEAR(winner_x(r), 3.0, 0.5);
  EXPECT_EQ(count_lines(counter), r.experiments_used);
  EXPECT_EQ(r.logged_executions, r.experiments_used);
  EXPECT_LE(r.experiments_used, 500u);
  EXPECT_EQ(r.max_experiments, 500u);
  EXPECT_EQ(r.best.config.variant_id, "A0");
  for (const char* f : {"winner.txt", "report.json", "run_log.jsonl"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / "out" / f)) << f;
  }
  const std::string winner = testing::slurp(dir / "out" / "winner.txt");
  EXPECT_EQ(winner, r.winner_line + "\nvariant A0\n");
  EXPECT_EQ(r.winner_line.rfind("--x ", 0), 0u);
}

TuningHooks in_memory_quadratic(std::atomic<std::uint64_t>* calls) {
  TuningHooks hooks;
  hooks.evaluator = [calls](const Configuration& c, const InstanceRef& inst) {
    ++*calls;
    const double x = c.theta.numeric("x");
    return (x - 3.0) * (x - 3.0) + static_cast<double>(inst.seed % 1000) * 1e-6;
  };
  return hooks;
}

TEST(Tuning, BudgetIsExactAcrossBudgets) {
  for (std::uint64_t budget : {60u, 137u, 250u, 999u}) {
    TempDir dir("tune-budget");
    QuadraticScenario s;
    s.budget = budget;
    Session session(testing::write_quadratic_scenario(dir.path(), s));
    std::atomic<std::uint64_t> calls{0};
    const TuningResult& r = session.tune(in_memory_quadratic(&calls));
    EXPECT_EQ(calls.load(), r.experiments_used) << budget;
    EXPECT_EQ(r.logged_executions, r.experiments_used);
    EXPECT_LE(r.experiments_used, budget);
    std::uint64_t prev = 0;
    for (const auto& it : r.iterations) {
      EXPECT_GE(it.experiments_used, prev);
      EXPECT_LE(it.experiments_used - prev, it.budget) << "iteration " << it.iteration;
      prev = it.experiments_used;
    }
  }
}

TEST(Tuning, DeterministicPerSeed) {
  auto run = [](std::uint64_t seed) {
    TempDir dir("tune-det");
    QuadraticScenario s;
    s.seed = seed;
    s.budget = 300;
    Session session(testing::write_quadratic_scenario(dir.path(), s));
    std::atomic<std::uint64_t> calls{0};
    const TuningResult& r = session.tune(in_memory_quadratic(&calls));
    return std::make_pair(r.winner_line, r.run_log_text);
  };
  EXPECT_EQ(run(7), run(7));
  EXPECT_NE(run(7).second, run(8).second);
}

TEST(Tuning, ConvergesWithLargeBudget) {
  TempDir dir("tune-conv");
  QuadraticScenario s;
  s.budget = 200000;
  Session session(testing::write_quadratic_scenario(dir.path(), s));
  std::atomic<std::uint64_t> calls{0};
  const TuningResult& r = session.tune(in_memory_quadratic(&calls));
  EXPECT_EQ(r.stop_reason, "converged");
  EXPECT_LT(r.experiments_used, 200000u);
  EXPECT_NEAR(winner_x(r), 3.0, 0.05);
}

TEST(Tuning, ValidationErrorsStopTheRun) {
  TempDir dir("tune-invalid");
  QuadraticScenario s;
  s.budget = 3;
  Session session(testing::write_quadratic_scenario(dir.path(), s));
  EXPECT_TRUE(session.validate().has_errors());
  try {
    session.tune();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kValidationFailed);
  }
}

TEST(Tuning, OverridesApply) {
  TempDir dir("tune-set");
  Session session(testing::write_quadratic_scenario(dir.path(), QuadraticScenario{}));
  session.set("maxExperiments", "120");
  std::atomic<std::uint64_t> calls{0};
  const TuningResult& r = session.tune(in_memory_quadratic(&calls));
  EXPECT_EQ(r.max_experiments, 120u);
  EXPECT_LE(r.experiments_used, 120u);
}

TEST(Tuning, IdentityVariantsLeaveOriginalWinning) {
  TempDir dir("tune-identity");
  QuadraticScenario s;
  s.code_evolution = true;
  s.mock_script = "quadratic_mixed.json";
  s.budget = 300;
  s.variants = 2;
  const auto counter = dir / "count.txt";
  ::setenv("EVORACER_COUNT_FILE", counter.c_str(), 1);
  Session session(testing::write_quadratic_scenario(dir.path(), s));
  session.set_output_dir(dir / "out");
  const TuningResult& r = session.tune();
  ::unsetenv("EVORACER_COUNT_FILE");
  EXPECT_EQ(count_lines(counter), r.experiments_used);
  EXPECT_EQ(r.logged_executions, r.experiments_used);
  // The first scripted answer repeats the original definition.
  EXPECT_EQ(r.registry.get("A1.1").status, VariantStatus::kDuplicate);
  EXPECT_FALSE(r.winner_source.empty());
  EXPECT_TRUE(std::filesystem::exists(dir / "out" / "transcript.jsonl"));
  EXPECT_TRUE(std::filesystem::exists(dir / "out" / "winner_variant.cpp"));
  EXPECT_NEAR(winner_x(r), 3.0, 1.0);
}

TEST(Tuning, ListInstancesSkipsManifest) {
  TempDir dir("tune-list");
  testing::spit(dir / "b.txt", "x");
  testing::spit(dir / "a.txt", "x");
  testing::spit(dir / ".hidden", "x");
  testing::spit(dir / "manifest.json", "{}");
  const auto files = list_instances(dir.path());
  ASSERT_EQ(files.size(), 2u);
  EXPECT_EQ(files[0].filename(), "a.txt");
  EXPECT_EQ(files[1].filename(), "b.txt");
}

}  // namespace
}  // namespace evoracer
