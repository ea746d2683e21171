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

#include "evoracer/evoracer.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "evoracer/error.hpp"
#include "evoracer/session.hpp"
#include "evoracer/stats.hpp"
#include "evoracer/util.hpp"
#include "evoracer/vsbpp/lab.hpp"

struct evo_session {
  std::unique_ptr<evoracer::Session> session;
  std::string last_error;
};

namespace {

using evoracer::Error;
using evoracer::ErrorCode;

evo_status to_status(ErrorCode code) {
  return static_cast<evo_status>(static_cast<int>(code) + 1);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void set_out(char** out, const std::string& s) {
  if (out != nullptr) *out = dup_string(s);
}

// Runs fn, turning exceptions into a status plus a message.
template <typename Fn>
evo_status guarded(std::string* message, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (message != nullptr) *message = e.what();
    return to_status(e.code());
  } catch (const std::exception& e) {
    if (message != nullptr) *message = e.what();
    return EVO_E_INTERNAL;
  } catch (...) {
    if (message != nullptr) *message = "unknown failure";
    return EVO_E_INTERNAL;
  }
}

std::vector<double> read_costs(const std::string& path) {
  std::vector<double> costs;
  std::istringstream in(evoracer::read_text_file(path));
  std::string token;
  while (in >> token) {
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0') {
      throw Error(ErrorCode::kMalformedInput, "not a number in " + path + ": " + token);
    }
    costs.push_back(v);
  }
  return costs;
}

std::string run_name(const std::string& path) {
  const std::filesystem::path p(path);
  // run_log.jsonl files sit in per-run directories; name rows after those.
  if (p.stem() == "run_log" && p.has_parent_path() && !p.parent_path().filename().empty()) {
    return p.parent_path().filename().string();
  }
  return p.stem().string();
}

}  // namespace

extern "C" {

const char* evo_version(void) { return "0.1.0"; }

const char* evo_status_name(evo_status status) {
  if (status == EVO_OK) return "Ok";
  if (status == EVO_E_NULL_ARGUMENT) return "NullArgument";
  if (status == EVO_E_INTERNAL) return "Internal";
  const int code = static_cast<int>(status) - 1;
  if (code >= 0 && code <= static_cast<int>(ErrorCode::kMalformedInput)) {
    return evoracer::error_code_name(static_cast<ErrorCode>(code));
  }
  return "Unknown";
}

void evo_string_free(char* text) { std::free(text); }

evo_status evo_session_open(const char* scenario_path, evo_session** out) {
  if (scenario_path == nullptr || out == nullptr) return EVO_E_NULL_ARGUMENT;
  *out = nullptr;
  return guarded(nullptr, [&] {
    auto* s = new evo_session;
    s->session = std::make_unique<evoracer::Session>(scenario_path);
    *out = s;
    return EVO_OK;
  });
}

void evo_session_close(evo_session* session) { delete session; }

evo_status evo_session_set(evo_session* session, const char* key, const char* value) {
  if (session == nullptr || key == nullptr || value == nullptr) return EVO_E_NULL_ARGUMENT;
  return guarded(&session->last_error, [&] {
    session->session->set(key, value);
    return EVO_OK;
  });
}

evo_status evo_session_set_output(evo_session* session, const char* dir) {
  if (session == nullptr || dir == nullptr) return EVO_E_NULL_ARGUMENT;
  return guarded(&session->last_error, [&] {
    session->session->set_output_dir(dir);
    return EVO_OK;
  });
}

evo_status evo_session_validate(evo_session* session, char** report_text, size_t* error_count) {
  if (session == nullptr) return EVO_E_NULL_ARGUMENT;
  return guarded(&session->last_error, [&] {
    const evoracer::ValidationReport report = session->session->validate();
    set_out(report_text, report.to_text());
    if (error_count != nullptr) *error_count = report.error_count();
    if (report.has_errors()) {
      session->last_error = report.to_text();
      return EVO_E_VALIDATION_FAILED;
    }
    return EVO_OK;
  });
}

evo_status evo_session_tune(evo_session* session) {
  if (session == nullptr) return EVO_E_NULL_ARGUMENT;
  return guarded(&session->last_error, [&] {
    session->session->tune();
    return EVO_OK;
  });
}

evo_status evo_session_winner_line(const evo_session* session, char** out) {
  if (session == nullptr || out == nullptr) return EVO_E_NULL_ARGUMENT;
  const auto& result = session->session->result();
  if (!result) return EVO_E_INVALID_ARGUMENT;
  *out = dup_string(result->winner_line);
  return EVO_OK;
}

evo_status evo_session_report_json(const evo_session* session, char** out) {
  if (session == nullptr || out == nullptr) return EVO_E_NULL_ARGUMENT;
  const auto& result = session->session->result();
  if (!result) return EVO_E_INVALID_ARGUMENT;
  *out = dup_string(result->report.dump(2));
  return EVO_OK;
}

const char* evo_session_last_error(const evo_session* session) {
  if (session == nullptr) return "null session";
  return session->last_error.c_str();
}

evo_status evo_generate_instances(const char* cost_class, const int* sizes, size_t n_sizes,
                                  unsigned count, uint64_t seed, const char* out_dir,
                                  char** manifest_json, char** error) {
  if (cost_class == nullptr || out_dir == nullptr || (sizes == nullptr && n_sizes > 0)) {
    return EVO_E_NULL_ARGUMENT;
  }
  std::string message;
  const evo_status st = guarded(&message, [&] {
    evoracer::vsbpp::CostClass c;
    if (!evoracer::vsbpp::parse_cost_class(cost_class, &c)) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string("unknown cost class '") + cost_class + "' (expected B1, B2 or B3)");
    }
    const std::vector<int> list(sizes, sizes + n_sizes);
    const nlohmann::json manifest =
        evoracer::vsbpp::write_instance_set(c, list, count, seed, out_dir);
    set_out(manifest_json, manifest.dump(2));
    return EVO_OK;
  });
  if (st != EVO_OK) set_out(error, message);
  return st;
}

evo_status evo_report(const char* kind, const char* const* paths, size_t n_paths,
                      const char* options_json, char** output, char** error) {
  if (kind == nullptr || (paths == nullptr && n_paths > 0)) return EVO_E_NULL_ARGUMENT;
  std::string message;
  const evo_status st = guarded(&message, [&] {
    nlohmann::json options = nlohmann::json::object();
    if (options_json != nullptr && *options_json != '\0') {
      try {
        options = nlohmann::json::parse(options_json);
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::kInvalidArgument, std::string("bad options: ") + e.what());
      }
    }
    const std::string k = kind;
    if (k == "cost") {
      evoracer::PriceTable prices;
      if (options.contains("prices")) {
        prices = evoracer::parse_price_table(
            evoracer::read_text_file(options["prices"].get<std::string>()));
      }
      evoracer::CostReport total;
      for (size_t i = 0; i < n_paths; ++i) {
        total += evoracer::cost_report(evoracer::read_text_file(paths[i]), prices);
      }
      set_out(output, total.to_json().dump(2) + "\n");
    } else if (k == "errors") {
      std::vector<evoracer::ErrorRateRow> rows;
      for (size_t i = 0; i < n_paths; ++i) {
        rows.push_back(evoracer::error_row_from_run_log(run_name(paths[i]),
                                                        evoracer::read_text_file(paths[i])));
      }
      const evoracer::ErrorRateReport report = evoracer::error_rate_report(rows);
      const std::string format = options.value("format", "table");
      set_out(output, format == "json" ? report.to_json().dump(2) + "\n" : report.to_table());
    } else if (k == "winrate") {
      if (n_paths != 2) {
        throw Error(ErrorCode::kInvalidArgument, "winrate needs variant and baseline cost files");
      }
      const std::string test = options.value("test", "sign");
      if (test != "sign" && test != "wilcoxon") {
        throw Error(ErrorCode::kInvalidArgument, "unknown test '" + test + "'");
      }
      const evoracer::WinRate w = evoracer::win_rate(
          read_costs(paths[0]), read_costs(paths[1]),
          test == "sign" ? evoracer::PairedTest::kSign : evoracer::PairedTest::kWilcoxon);
      const nlohmann::json j = {{"rate_percent", w.rate_percent}, {"p_value", w.p_value},
                                {"stars", w.stars},               {"wins", w.wins},
                                {"losses", w.losses},             {"ties", w.ties},
                                {"test", w.test}};
      set_out(output, j.dump(2) + "\n");
    } else {
      throw Error(ErrorCode::kInvalidArgument,
                  "unknown report kind '" + k + "' (expected cost, errors or winrate)");
    }
    return EVO_OK;
  });
  if (st != EVO_OK) set_out(error, message);
  return st;
}

}  // extern "C"
