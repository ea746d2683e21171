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
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace evoracer {

// blocks × treatments; row i holds every treatment's cost on block i.
using CostMatrix = std::vector<std::vector<double>>;

// Within-row ranks starting at 1; ties share their mean rank.
std::vector<double> average_ranks(const std::vector<double>& row);

struct FriedmanResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::vector<double> rank_sums;
  std::vector<double> mean_ranks;
  bool degenerate = false;  // every block fully tied
};

// Tie-corrected Friedman statistic, chi-square with k−1 df.
// Throws kInvalidArgument for fewer than 2 treatments or blocks, or a ragged
// matrix.
FriedmanResult friedman(const CostMatrix& matrix);

// Survivor indices after F-Race elimination: when p < alpha, treatments whose
// rank sum exceeds the best one's by more than the Conover critical
// difference are dropped. Never empty.
std::vector<std::size_t> frace_survivors(const CostMatrix& matrix, double alpha);

double chi_square_sf(double x, double df);

enum class PairedTest { kSign, kWilcoxon };

struct WinRate {
  double rate_percent = 0.0;
  double p_value = 1.0;
  std::string stars;
  int wins = 0;
  int losses = 0;
  int ties = 0;
  std::string test;
};

// Exact two-sided sign test over wins/losses (ties dropped).
double sign_test_p_value(int wins, int losses);
// Two-sided Wilcoxon signed-rank; exact below 26 non-zero differences.
double wilcoxon_p_value(const std::vector<double>& differences);
std::string significance_stars(double p_value);

WinRate win_rate(const std::vector<double>& variant_costs,
                 const std::vector<double>& baseline_costs, PairedTest test = PairedTest::kSign);

struct ErrorRateRow {
  std::string run;
  std::uint64_t compile_errors = 0;
  std::uint64_t iterations = 0;
  std::uint64_t variants = 0;
  double error_rate_percent = 0.0;
};

struct ErrorRateReport {
  std::vector<ErrorRateRow> rows;
  ErrorRateRow totals;

  std::string to_table() const;
  nlohmann::json to_json() const;
};

// Per-run rows truncate to two decimals (2/30 → 6.66); the totals row rounds
// (21/315 → 6.67).
double truncated_percent(std::uint64_t errors, std::uint64_t variants);
double rounded_percent(std::uint64_t errors, std::uint64_t variants);

ErrorRateReport error_rate_report(const std::vector<ErrorRateRow>& runs);

// Summarizes one run log (JSONL): iterations that generated variants, variant
// records, and variants whose final status is CompileFailed.
ErrorRateRow error_row_from_run_log(std::string_view run_name, std::string_view jsonl);

struct Price {
  double input_per_mtok = 0.0;
  double output_per_mtok = 0.0;
};

using PriceTable = std::map<std::string, Price>;

// {"model": {"input": x, "output": y}, ...} with prices per million tokens.
PriceTable parse_price_table(std::string_view json_text);

struct CostReport {
  std::uint64_t prompt_tokens = 0;
  std::uint64_t completion_tokens = 0;
  std::uint64_t calls = 0;
  double total_price = 0.0;

  std::uint64_t total_tokens() const { return prompt_tokens + completion_tokens; }
  CostReport& operator+=(const CostReport& other);
  nlohmann::json to_json() const;
};

CostReport cost_of_tokens(std::uint64_t prompt_tokens, std::uint64_t completion_tokens,
                          const Price& price);
// Sums llm_response entries of a transcript (JSONL). Models absent from the
// table are priced at 0.
CostReport cost_report(std::string_view transcript_jsonl, const PriceTable& prices);

}  // namespace evoracer
