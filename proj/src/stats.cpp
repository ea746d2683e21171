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

#include "evoracer/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "evoracer/error.hpp"
#include "evoracer/util.hpp"

namespace evoracer {

std::vector<double> average_ranks(const std::vector<double>& row) {
  std::vector<std::size_t> order(row.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return row[a] < row[b]; });
  std::vector<double> ranks(row.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && row[order[j + 1]] == row[order[i]]) ++j;
    const double mean = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mean;
    i = j + 1;
  }
  return ranks;
}

double chi_square_sf(double x, double df) {
  if (!(x > 0.0)) return 1.0;
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared(df), x));
}

namespace {

struct RankSummary {
  std::vector<double> rank_sums;
  double sum_sq_ranks = 0.0;  // A
  std::size_t n = 0;
  std::size_t k = 0;
};

RankSummary summarize(const CostMatrix& matrix) {
  if (matrix.size() < 2) throw Error(ErrorCode::kInvalidArgument, "friedman needs >= 2 blocks");
  const std::size_t k = matrix.front().size();
  if (k < 2) throw Error(ErrorCode::kInvalidArgument, "friedman needs >= 2 treatments");
  RankSummary s{std::vector<double>(k, 0.0), 0.0, matrix.size(), k};
  for (const auto& row : matrix) {
    if (row.size() != k) throw Error(ErrorCode::kInvalidArgument, "ragged cost matrix");
    const auto ranks = average_ranks(row);
    for (std::size_t j = 0; j < k; ++j) {
      s.rank_sums[j] += ranks[j];
      s.sum_sq_ranks += ranks[j] * ranks[j];
    }
  }
  return s;
}

}  // namespace

FriedmanResult friedman(const CostMatrix& matrix) {
  const RankSummary s = summarize(matrix);
  const double n = static_cast<double>(s.n);
  const double k = static_cast<double>(s.k);
  FriedmanResult r;
  r.rank_sums = s.rank_sums;
  for (const double rs : s.rank_sums) r.mean_ranks.push_back(rs / n);

  // T = (k−1)·Σ(R_j − n(k+1)/2)² / (A − C), which reduces to
  // 12/(nk(k+1))·ΣR_j² − 3n(k+1) without ties.
  const double c = n * k * (k + 1.0) * (k + 1.0) / 4.0;
  const double denom = s.sum_sq_ranks - c;
  if (denom <= 1e-12 * std::max(1.0, c)) {
    r.degenerate = true;
    return r;
  }
  double dev = 0.0;
  for (const double rs : s.rank_sums) {
    const double d = rs - n * (k + 1.0) / 2.0;
    dev += d * d;
  }
  r.statistic = (k - 1.0) * dev / denom;
  r.p_value = chi_square_sf(r.statistic, k - 1.0);
  return r;
}

std::vector<std::size_t> frace_survivors(const CostMatrix& matrix, double alpha) {
  const RankSummary s = summarize(matrix);
  const FriedmanResult f = friedman(matrix);
  std::vector<std::size_t> all(s.k);
  std::iota(all.begin(), all.end(), 0);
  if (f.degenerate || !(f.p_value < alpha)) return all;

  const double n = static_cast<double>(s.n);
  const double k = static_cast<double>(s.k);
  double sum_r2 = 0.0;
  for (const double rs : s.rank_sums) sum_r2 += rs * rs;
  const double dof = (n - 1.0) * (k - 1.0);
  const double spread = 2.0 * (n * s.sum_sq_ranks - sum_r2) / dof;
  const double t = boost::math::quantile(boost::math::students_t(dof), 1.0 - alpha / 2.0);
  const double critical = t * std::sqrt(std::max(0.0, spread));

  const double best = *std::min_element(s.rank_sums.begin(), s.rank_sums.end());
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < s.k; ++j) {
    if (s.rank_sums[j] - best <= critical) keep.push_back(j);
  }
  return keep;
}

double sign_test_p_value(int wins, int losses) {
  const int n = wins + losses;
  if (n == 0) return 1.0;
  const int m = std::min(wins, losses);
  // Σ_{i≤m} C(n,i) / 2^n, accumulated in log space for large n.
  double tail = 0.0;
  for (int i = 0; i <= m; ++i) {
    tail += std::exp(std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) -
                     n * std::log(2.0));
  }
  return std::min(1.0, 2.0 * tail);
}

double wilcoxon_p_value(const std::vector<double>& differences) {
  std::vector<double> nz;
  for (const double d : differences) {
    if (d != 0.0) nz.push_back(d);
  }
  const std::size_t n = nz.size();
  if (n == 0) return 1.0;
  std::vector<double> abs_d(n);
  for (std::size_t i = 0; i < n; ++i) abs_d[i] = std::fabs(nz[i]);
  const auto ranks = average_ranks(abs_d);
  double w_plus = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (nz[i] > 0) w_plus += ranks[i];
  }

  if (n < 26) {
    // Exact null distribution over doubled (integral) ranks.
    std::vector<int> r2(n);
    int total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      r2[i] = static_cast<int>(std::lround(2.0 * ranks[i]));
      total += r2[i];
    }
    std::vector<double> dist(static_cast<std::size_t>(total) + 1, 0.0);
    dist[0] = 1.0;
    for (const int r : r2) {
      for (int s = total; s >= r; --s) dist[s] += dist[s - r];
    }
    const double count = std::ldexp(1.0, static_cast<int>(n));
    const int w = static_cast<int>(std::lround(2.0 * w_plus));
    double lower = 0.0;
    double upper = 0.0;
    for (int s = 0; s <= total; ++s) {
      if (s <= w) lower += dist[s];
      if (s >= w) upper += dist[s];
    }
    return std::min(1.0, 2.0 * std::min(lower, upper) / count);
  }

  const double nn = static_cast<double>(n);
  const double mean = nn * (nn + 1.0) / 4.0;
  double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0;
  // Tie correction.
  std::vector<double> sorted = abs_d;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && sorted[j] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i);
    var -= (t * t * t - t) / 48.0;
    i = j;
  }
  if (var <= 0.0) return 1.0;
  const double z = (w_plus - mean) / std::sqrt(var);
  return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(boost::math::normal(),
                                                                       std::fabs(z))));
}

std::string significance_stars(double p_value) {
  if (p_value < 0.001) return "***";
  if (p_value < 0.01) return "**";
  if (p_value < 0.05) return "*";
  return "";
}

WinRate win_rate(const std::vector<double>& variant_costs,
                 const std::vector<double>& baseline_costs, PairedTest test) {
  if (variant_costs.size() != baseline_costs.size()) {
    throw Error(ErrorCode::kInvalidArgument, "win_rate needs paired cost vectors");
  }
  WinRate w;
  std::vector<double> diffs;
  for (std::size_t i = 0; i < variant_costs.size(); ++i) {
    const double d = baseline_costs[i] - variant_costs[i];
    if (d > 0) {
      ++w.wins;
    } else if (d < 0) {
      ++w.losses;
    } else {
      ++w.ties;
    }
    diffs.push_back(d);
  }
  const std::size_t n = variant_costs.size();
  w.rate_percent = n == 0 ? 0.0 : 100.0 * w.wins / static_cast<double>(n);
  if (test == PairedTest::kSign) {
    w.p_value = sign_test_p_value(w.wins, w.losses);
    w.test = "sign test (exact, two-sided)";
  } else {
    w.p_value = wilcoxon_p_value(diffs);
    w.test = "Wilcoxon signed-rank (two-sided)";
  }
  w.stars = significance_stars(w.p_value);
  return w;
}

double truncated_percent(std::uint64_t errors, std::uint64_t variants) {
  if (variants == 0) return 0.0;
  return static_cast<double>((10000 * errors) / variants) / 100.0;
}

double rounded_percent(std::uint64_t errors, std::uint64_t variants) {
  if (variants == 0) return 0.0;
  return static_cast<double>((20000 * errors / variants + 1) / 2) / 100.0;
}

ErrorRateReport error_rate_report(const std::vector<ErrorRateRow>& runs) {
  ErrorRateReport report;
  report.totals.run = "Total";
  for (ErrorRateRow row : runs) {
    row.error_rate_percent = truncated_percent(row.compile_errors, row.variants);
    report.totals.compile_errors += row.compile_errors;
    report.totals.iterations += row.iterations;
    report.totals.variants += row.variants;
    report.rows.push_back(std::move(row));
  }
  report.totals.error_rate_percent =
      rounded_percent(report.totals.compile_errors, report.totals.variants);
  return report;
}

namespace {
std::string two_decimals(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

nlohmann::json row_json(const ErrorRateRow& r) {
  return {{"run", r.run},
          {"compile_errors", r.compile_errors},
          {"iterations", r.iterations},
          {"variants", r.variants},
          {"error_rate_percent", r.error_rate_percent}};
}
}  // namespace

std::string ErrorRateReport::to_table() const {
  std::ostringstream out;
  std::size_t width = 5;
  for (const auto& r : rows) width = std::max(width, r.run.size());
  auto line = [&](const ErrorRateRow& r) {
    out << r.run << std::string(width - r.run.size() + 2, ' ') << r.compile_errors << '\t'
        << r.iterations << '\t' << r.variants << '\t' << two_decimals(r.error_rate_percent)
        << '\n';
  };
  out << "Run" << std::string(width - 3 + 2, ' ') << "Errors\tIterations\tVariants\tRate%\n";
  for (const auto& r : rows) line(r);
  line(totals);
  return out.str();
}

nlohmann::json ErrorRateReport::to_json() const {
  nlohmann::json j;
  j["rows"] = nlohmann::json::array();
  for (const auto& r : rows) j["rows"].push_back(row_json(r));
  j["totals"] = row_json(totals);
  return j;
}

namespace {
template <typename Fn>
void for_each_json_line(std::string_view jsonl, Fn&& fn) {
  for (const auto& line : split_lines(jsonl)) {
    if (trim(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kMalformedInput, std::string("bad log line: ") + e.what());
    }
    fn(j);
  }
}
}  // namespace

ErrorRateRow error_row_from_run_log(std::string_view run_name, std::string_view jsonl) {
  ErrorRateRow row;
  row.run = std::string(run_name);
  for_each_json_line(jsonl, [&](const nlohmann::json& j) {
    const std::string event = j.value("event", "");
    if (event == "evolution_start") {
      ++row.iterations;
    } else if (event == "variant") {
      ++row.variants;
      if (j.value("status", "") == "CompileFailed") ++row.compile_errors;
    }
  });
  row.error_rate_percent = truncated_percent(row.compile_errors, row.variants);
  return row;
}

PriceTable parse_price_table(std::string_view json_text) {
  PriceTable table;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedInput, std::string("price table: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::kSchemaViolation, "price table: expected object");
  for (const auto& [model, entry] : j.items()) {
    try {
      table[model] = Price{entry.value("input", 0.0), entry.value("output", 0.0)};
    } catch (const nlohmann::json::exception&) {
      throw Error(ErrorCode::kSchemaViolation, "price table: " + model + ": expected numbers");
    }
  }
  return table;
}

CostReport& CostReport::operator+=(const CostReport& other) {
  prompt_tokens += other.prompt_tokens;
  completion_tokens += other.completion_tokens;
  calls += other.calls;
  total_price += other.total_price;
  return *this;
}

nlohmann::json CostReport::to_json() const {
  return {{"calls", calls},
          {"prompt_tokens", prompt_tokens},
          {"completion_tokens", completion_tokens},
          {"total_tokens", total_tokens()},
          {"total_price", total_price}};
}

CostReport cost_of_tokens(std::uint64_t prompt_tokens, std::uint64_t completion_tokens,
                          const Price& price) {
  CostReport r;
  r.prompt_tokens = prompt_tokens;
  r.completion_tokens = completion_tokens;
  r.calls = 1;
  r.total_price = (static_cast<double>(prompt_tokens) * price.input_per_mtok +
                   static_cast<double>(completion_tokens) * price.output_per_mtok) /
                  1e6;
  return r;
}

CostReport cost_report(std::string_view transcript_jsonl, const PriceTable& prices) {
  CostReport total;
  for_each_json_line(transcript_jsonl, [&](const nlohmann::json& j) {
    if (j.value("event", "") != "llm_response") return;
    const auto it = prices.find(j.value("model", ""));
    const Price price = it == prices.end() ? Price{} : it->second;
    total += cost_of_tokens(j.value("prompt_tokens", std::uint64_t{0}),
                            j.value("completion_tokens", std::uint64_t{0}), price);
  });
  return total;
}

}  // namespace evoracer
