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

// evoracer command-line front end. Uses only the C API.

#include <cstdio>
#include <ctime>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "evoracer/evoracer.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFatal = 2;

int exit_code_for(evo_status st) {
  switch (st) {
    case EVO_OK:
      return kExitOk;
    case EVO_E_FATAL_ENVIRONMENT:
    case EVO_E_TOOL_MISSING:
    case EVO_E_INTERNAL:
      return kExitFatal;
    default:
      return kExitUsage;
  }
}

// Owns a string returned by the library.
struct Owned {
  char* p = nullptr;
  ~Owned() { evo_string_free(p); }
  std::string str() const { return p != nullptr ? p : ""; }
};

std::string default_out_dir() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  localtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%d-%H%M%S", &tm);
  return std::string("evoracer-out/") + buf;
}

bool split_override(const std::string& kv, std::string* key, std::string* value) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0) return false;
  *key = kv.substr(0, eq);
  *value = kv.substr(eq + 1);
  return true;
}

// Opens a session with overrides applied; prints and returns an exit code on
// failure, or -1 on success.
int open_session(const std::string& scenario, const std::vector<std::string>& sets,
                 const std::string* seed, evo_session** out) {
  evo_status st = evo_session_open(scenario.c_str(), out);
  if (st != EVO_OK) {
    std::cerr << "error: cannot open session: " << evo_status_name(st) << "\n";
    return exit_code_for(st);
  }
  for (const auto& kv : sets) {
    std::string key;
    std::string value;
    if (!split_override(kv, &key, &value)) {
      std::cerr << "error: --set expects key=value, got '" << kv << "'\n";
      return kExitUsage;
    }
    evo_session_set(*out, key.c_str(), value.c_str());
  }
  if (seed != nullptr && !seed->empty()) evo_session_set(*out, "seed", seed->c_str());
  return -1;
}

struct SessionGuard {
  evo_session* s = nullptr;
  ~SessionGuard() { evo_session_close(s); }
};

int cmd_tune(const std::string& scenario, const std::vector<std::string>& sets,
             const std::string& seed, std::string out) {
  SessionGuard g;
  if (const int rc = open_session(scenario, sets, &seed, &g.s); rc >= 0) return rc;
  if (out.empty()) out = default_out_dir();
  evo_session_set_output(g.s, out.c_str());
  const evo_status st = evo_session_tune(g.s);
  if (st != EVO_OK) {
    std::cerr << "error (" << evo_status_name(st) << "): " << evo_session_last_error(g.s) << "\n";
    return exit_code_for(st);
  }
  Owned line;
  evo_session_winner_line(g.s, &line.p);
  std::cout << line.str() << "\n";
  std::cerr << "results written to " << out << "\n";
  return kExitOk;
}

int cmd_validate(const std::string& scenario, const std::vector<std::string>& sets) {
  SessionGuard g;
  if (const int rc = open_session(scenario, sets, nullptr, &g.s); rc >= 0) return rc;
  Owned text;
  std::size_t errors = 0;
  const evo_status st = evo_session_validate(g.s, &text.p, &errors);
  std::cout << text.str();
  if (st == EVO_OK) {
    std::cout << "ok\n";
    return kExitOk;
  }
  if (st != EVO_E_VALIDATION_FAILED) {
    std::cerr << "error (" << evo_status_name(st) << "): " << evo_session_last_error(g.s) << "\n";
  }
  return exit_code_for(st);
}

int cmd_gen(const std::string& cls, const std::vector<int>& sizes, unsigned count,
            std::uint64_t seed, const std::string& out) {
  Owned manifest;
  Owned error;
  const evo_status st = evo_generate_instances(cls.c_str(), sizes.data(), sizes.size(), count,
                                               seed, out.c_str(), &manifest.p, &error.p);
  if (st != EVO_OK) {
    std::cerr << "error (" << evo_status_name(st) << "): " << error.str() << "\n";
    return exit_code_for(st);
  }
  std::cout << count * sizes.size() << " instance(s) written to " << out << "\n";
  return kExitOk;
}

int cmd_report(const std::string& kind, const std::vector<std::string>& inputs,
               const std::string& options, CLI::App* usage) {
  if (kind != "cost" && kind != "errors" && kind != "winrate") {
    std::cerr << "error: unknown report kind '" << kind << "'\n\n" << usage->help();
    return kExitUsage;
  }
  std::vector<const char*> paths;
  for (const auto& p : inputs) paths.push_back(p.c_str());
  Owned output;
  Owned error;
  const evo_status st = evo_report(kind.c_str(), paths.data(), paths.size(), options.c_str(),
                                   &output.p, &error.p);
  if (st != EVO_OK) {
    std::cerr << "error (" << evo_status_name(st) << "): " << error.str() << "\n";
    return exit_code_for(st);
  }
  std::cout << output.str();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"evoracer: iterated racing with LLM-driven code evolution"};
  app.set_version_flag("--version", evo_version());
  app.require_subcommand(1);

  std::string scenario;
  std::vector<std::string> sets;
  std::string seed;
  std::string out;
  auto* tune = app.add_subcommand("tune", "run a tuning session");
  tune->add_option("scenario", scenario, "scenario file")->required();
  tune->add_option("--set", sets, "scenario override key=value (repeatable)");
  tune->add_option("--seed", seed, "run seed (overrides the scenario)");
  tune->add_option("--out", out, "output directory (default evoracer-out/<timestamp>)");
  unsigned jobs = 0;
  tune->add_option("--jobs", jobs, "parallel target executions (overrides the scenario)")
      ->check(CLI::PositiveNumber);

  auto* validate = app.add_subcommand("validate", "check scenario and configuration files");
  validate->add_option("scenario", scenario, "scenario file")->required();
  validate->add_option("--set", sets, "scenario override key=value (repeatable)");

  std::string cls;
  std::vector<int> sizes;
  unsigned count = 10;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen-instances", "generate VSBPP instances");
  gen->add_option("--class", cls, "cost class B1, B2 or B3")->required();
  gen->add_option("--n", sizes, "instance sizes")->required()->delimiter(',');
  gen->add_option("--count", count, "instances per size");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", gen_out, "output directory")->required();

  std::string kind;
  std::vector<std::string> inputs;
  std::string prices;
  std::string format = "table";
  std::string test = "sign";
  auto* report = app.add_subcommand("report", "summaries of transcripts and run logs");
  report->add_option("kind", kind, "cost | errors | winrate")->required();
  report->add_option("inputs", inputs,
                     "cost: transcripts; errors: run logs; winrate: variant and baseline costs");
  report->add_option("--prices", prices, "price table JSON (cost)");
  report->add_option("--format", format, "table | json (errors)");
  report->add_option("--test", test, "sign | wilcoxon (winrate)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (tune->parsed()) {
    if (jobs > 0) sets.push_back("parallel=" + std::to_string(jobs));
    return cmd_tune(scenario, sets, seed, out);
  }
  if (validate->parsed()) return cmd_validate(scenario, sets);
  if (gen->parsed()) return cmd_gen(cls, sizes, count, gen_seed, gen_out);
  std::string options = "{\"format\":\"" + format + "\",\"test\":\"" + test + "\"";
  if (!prices.empty()) {
    // Minimal escaping; paths with quotes or backslashes are unusual here.
    std::string esc;
    for (const char c : prices) {
      if (c == '"' || c == '\\') esc += '\\';
      esc += c;
    }
    options += ",\"prices\":\"" + esc + "\"";
  }
  options += "}";
  return cmd_report(kind, inputs, options, report);
}
