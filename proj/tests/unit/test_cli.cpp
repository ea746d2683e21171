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

#include <nlohmann/json.hpp>

#include "evoracer/build_exec.hpp"
#include "test_support.hpp"

namespace evoracer {
namespace {

using testing::TempDir;

ProcessOutcome cli(std::vector<std::string> args, double timeout = 300.0) {
  args.insert(args.begin(), testing::cli_path().string());
  return run_process(args, timeout);
}

std::size_t files_in(const std::filesystem::path& dir) {
  std::size_t n = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) n += e.is_regular_file() ? 1 : 0;
  return n;
}

TEST(Cli, TuneWritesArtifactsAndPrintsWinner) {
  TempDir dir("cli-tune");
  testing::QuadraticScenario s;
  s.code_evolution = true;
  s.mock_script = "quadratic_mixed.json";
  s.budget = 200;
  s.variants = 2;
  const auto scenario = testing::write_quadratic_scenario(dir.path(), s);
  const ProcessOutcome out = cli({"tune", scenario.string(), "--out", (dir / "out").string()});
  ASSERT_EQ(out.exit_code, 0) << out.stderr_text;
  EXPECT_NE(out.stdout_text.find("--x "), std::string::npos);
  for (const char* f : {"winner.txt", "winner_variant.cpp", "transcript.jsonl", "run_log.jsonl",
                        "report.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / "out" / f)) << f;
  }
}

TEST(Cli, SeedSevenTwiceIsByteIdentical) {
  TempDir dir("cli-seed");
  const auto scenario = testing::write_quadratic_scenario(dir.path(), testing::QuadraticScenario{});
  const ProcessOutcome a =
      cli({"tune", scenario.string(), "--seed", "7", "--out", (dir / "a").string()});
  const ProcessOutcome b =
      cli({"tune", scenario.string(), "--seed", "7", "--out", (dir / "b").string()});
  ASSERT_EQ(a.exit_code, 0) << a.stderr_text;
  ASSERT_EQ(b.exit_code, 0) << b.stderr_text;
  EXPECT_EQ(testing::slurp(dir / "a" / "winner.txt"), testing::slurp(dir / "b" / "winner.txt"));
  EXPECT_EQ(testing::slurp(dir / "a" / "run_log.jsonl"), testing::slurp(dir / "b" / "run_log.jsonl"));
}

TEST(Cli, MissingCodeEvolutionConfigExitsOne) {
  TempDir dir("cli-missing");
  testing::QuadraticScenario s;
  s.code_evolution = true;
  s.mock_script = "quadratic_mixed.json";
  const auto scenario = testing::write_quadratic_scenario(dir.path(), s);
  std::filesystem::remove(dir / "code-evolution.json");
  EXPECT_EQ(cli({"tune", scenario.string(), "--out", (dir / "out").string()}).exit_code, 1);
  EXPECT_EQ(cli({"validate", scenario.string()}).exit_code, 1);
}

TEST(Cli, ValidateAndOverrides) {
  TempDir dir("cli-validate");
  const auto scenario = testing::write_quadratic_scenario(dir.path(), testing::QuadraticScenario{});
  EXPECT_EQ(cli({"validate", scenario.string()}).exit_code, 0);
  EXPECT_EQ(cli({"validate", scenario.string(), "--set", "maxExperiments=2"}).exit_code, 1);
  EXPECT_EQ(cli({"validate", scenario.string(), "--set", "novalue"}).exit_code, 1);
  EXPECT_EQ(cli({"validate", (dir / "nope.txt").string()}).exit_code, 1);
}

TEST(Cli, FatalEnvironmentExitsTwo) {
  TempDir dir("cli-fatal");
  testing::QuadraticScenario s;
  s.code_evolution = true;
  s.mock_script = "quadratic_mixed.json";
  const auto scenario = testing::write_quadratic_scenario(dir.path(), s);
  auto ces = nlohmann::json::parse(testing::slurp(dir / "code-evolution.json"));
  ces["build_config"]["cpp"]["flags"] = {"-std=c++17", "-DFORCE_FAIL", "-include", "missing_header_xyz.h"};
  testing::spit(dir / "code-evolution.json", ces.dump());
  EXPECT_EQ(cli({"tune", scenario.string(), "--out", (dir / "out").string()}).exit_code, 2);
}

TEST(Cli, GenInstances) {
  TempDir dir("cli-gen");
  const auto a = dir / "a";
  ASSERT_EQ(cli({"gen-instances", "--class", "B3", "--n", "100", "--count", "10", "--seed", "5",
                 "--out", a.string()})
                .exit_code,
            0);
  EXPECT_EQ(files_in(a), 11u);  // ten instances + manifest
  const auto b = dir / "b";
  cli({"gen-instances", "--class", "B3", "--n", "100", "--count", "10", "--seed", "5", "--out",
       b.string()});
  for (const auto& e : std::filesystem::directory_iterator(a)) {
    EXPECT_EQ(testing::slurp(e.path()), testing::slurp(b / e.path().filename()));
  }
  const auto empty = dir / "empty";
  EXPECT_EQ(cli({"gen-instances", "--class", "B1", "--n", "100,200", "--count", "0", "--out",
                 empty.string()})
                .exit_code,
            0);
  EXPECT_EQ(files_in(empty), 1u);
  EXPECT_TRUE(std::filesystem::exists(empty / "manifest.json"));
  EXPECT_EQ(cli({"gen-instances", "--class", "B9", "--n", "10", "--out", (dir / "c").string()})
                .exit_code,
            1);
  const auto multi = dir / "multi";
  cli({"gen-instances", "--class", "B2", "--n", "10,20", "--count", "2", "--out", multi.string()});
  EXPECT_EQ(files_in(multi), 5u);
}

TEST(Cli, ErrorReportReproducesPublishedTotals) {
  TempDir dir("cli-report");
  std::vector<std::string> args = {"report", "errors"};
  for (const auto& p : testing::write_published_logs(dir.path())) args.push_back(p.string());
  const ProcessOutcome table = cli(args);
  ASSERT_EQ(table.exit_code, 0) << table.stderr_text;
  EXPECT_NE(table.stdout_text.find("21\t63\t315\t6.67"), std::string::npos) << table.stdout_text;
  EXPECT_NE(table.stdout_text.find("run09"), std::string::npos);
  args.push_back("--format");
  args.push_back("json");
  const auto j = nlohmann::json::parse(cli(args).stdout_text);
  EXPECT_EQ(j["rows"].size(), 10u);
  EXPECT_DOUBLE_EQ(j["totals"]["error_rate_percent"].get<double>(), 6.67);
}

TEST(Cli, CostReportOnEmptyTranscript) {
  TempDir dir("cli-cost");
  testing::spit(dir / "transcript.jsonl", "");
  const ProcessOutcome out = cli({"report", "cost", (dir / "transcript.jsonl").string()});
  ASSERT_EQ(out.exit_code, 0) << out.stderr_text;
  const auto j = nlohmann::json::parse(out.stdout_text);
  EXPECT_EQ(j["calls"], 0);
  EXPECT_EQ(j["prompt_tokens"], 0);
  EXPECT_DOUBLE_EQ(j["total_price"].get<double>(), 0.0);
  testing::spit(dir / "bad.jsonl", "{not json\n");
  EXPECT_EQ(cli({"report", "cost", (dir / "bad.jsonl").string()}).exit_code, 1);
}

TEST(Cli, WinrateReport) {
  TempDir dir("cli-winrate");
  testing::spit(dir / "v.txt", "1\n1\n1\n1\n1\n1\n1\n1\n1\n5\n");
  testing::spit(dir / "b.txt", "2\n2\n2\n2\n2\n2\n2\n2\n2\n2\n");
  const ProcessOutcome out =
      cli({"report", "winrate", (dir / "v.txt").string(), (dir / "b.txt").string()});
  ASSERT_EQ(out.exit_code, 0) << out.stderr_text;
  const auto j = nlohmann::json::parse(out.stdout_text);
  EXPECT_EQ(j["wins"], 9);
  EXPECT_NEAR(j["p_value"].get<double>(), 22.0 / 1024.0, 1e-12);
}

TEST(Cli, UnknownKindPrintsUsage) {
  const ProcessOutcome out = cli({"report", "bogus"});
  EXPECT_EQ(out.exit_code, 1);
  EXPECT_NE((out.stdout_text + out.stderr_text).find("cost"), std::string::npos);
  EXPECT_EQ(cli({}).exit_code, 1);
}

}  // namespace
}  // namespace evoracer
