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

#include <cmath>
#include <numeric>

#include "evoracer/error.hpp"
#include "evoracer/stats.hpp"

namespace evoracer {
namespace {

// Binomial(n, 1/2) two-sided tail, summed directly.
double binomial_two_sided(int wins, int losses) {
  const int n = wins + losses;
  const int k = std::min(wins, losses);
  double tail = 0.0;
  for (int i = 0; i <= k; ++i) {
    double c = 1.0;
    for (int j = 0; j < i; ++j) c = c * (n - j) / (j + 1);
    tail += c;
  }
  return std::min(1.0, 2.0 * tail / std::ldexp(1.0, n));
}

// Exact two-sided signed-rank p by enumerating all sign patterns (no ties).
double wilcoxon_enumerated(const std::vector<double>& d) {
  const int n = static_cast<int>(d.size());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return std::fabs(d[a]) < std::fabs(d[b]); });
  std::vector<int> rank(n);
  for (int r = 0; r < n; ++r) rank[order[r]] = r + 1;
  int w_plus = 0;
  for (int i = 0; i < n; ++i) w_plus += d[i] > 0 ? rank[i] : 0;
  const int total = n * (n + 1) / 2;
  const int obs = std::min(w_plus, total - w_plus);
  long long at_most = 0;
  for (long long mask = 0; mask < (1LL << n); ++mask) {
    int w = 0;
    for (int i = 0; i < n; ++i) w += (mask >> i & 1) ? i + 1 : 0;
    if (w <= obs) ++at_most;
  }
  return std::min(1.0, 2.0 * static_cast<double>(at_most) / std::ldexp(1.0, n));
}

TEST(Ranks, TiesShareMeanRank) {
  EXPECT_EQ(average_ranks({3.0, 1.0, 2.0}), (std::vector<double>{3.0, 1.0, 2.0}));
  EXPECT_EQ(average_ranks({5.0, 5.0, 1.0, 5.0}), (std::vector<double>{3.0, 3.0, 1.0, 3.0}));
}

TEST(Friedman, UnanimousThreeByThree) {
  // Rank sums 3, 6, 9 with n = 3, k = 3: 12/(n k (k+1)) · ΣR² − 3 n (k+1) = 6.
  const FriedmanResult r = friedman({{1, 2, 3}, {1, 2, 3}, {1, 2, 3}});
  EXPECT_NEAR(r.statistic, 6.0, 1e-12);
  EXPECT_NEAR(r.p_value, std::exp(-3.0), 1e-12);  // chi-square df 2 survival
  EXPECT_EQ(r.rank_sums, (std::vector<double>{3, 6, 9}));
}

TEST(Friedman, UnanimousTenByTwo) {
  CostMatrix m(10, std::vector<double>{1.0, 2.0});
  const FriedmanResult r = friedman(m);
  EXPECT_NEAR(r.statistic, 10.0, 1e-12);
  EXPECT_NEAR(r.p_value, std::erfc(std::sqrt(5.0)), 1e-12);  // df 1
  EXPECT_NEAR(r.p_value, 0.00157, 1e-5);
}

TEST(Friedman, TieCorrection) {
  // Block 2 ties the first two treatments; compare with the irace formula
  // written out by hand.
  const CostMatrix m = {{1, 2, 3}, {1, 1, 3}, {2, 1, 3}, {1, 2, 3}};
  const FriedmanResult r = friedman(m);
  const double n = 4, k = 3;
  const std::vector<std::vector<double>> ranks = {{1, 2, 3}, {1.5, 1.5, 3}, {2, 1, 3}, {1, 2, 3}};
  std::vector<double> R(3, 0.0);
  double A = 0.0;
  for (const auto& row : ranks) {
    for (int j = 0; j < 3; ++j) {
      R[j] += row[j];
      A += row[j] * row[j];
    }
  }
  const double C = n * k * (k + 1) * (k + 1) / 4.0;
  double ss = 0.0;
  for (double x : R) ss += (x - n * (k + 1) / 2.0) * (x - n * (k + 1) / 2.0);
  EXPECT_NEAR(r.statistic, (k - 1) * ss / (A - C), 1e-12);
}

TEST(Friedman, DegenerateAllTied) {
  const FriedmanResult r = friedman({{1, 1}, {2, 2}, {3, 3}});
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_EQ(r.p_value, 1.0);
}

TEST(Friedman, RejectsBadShapes) {
  EXPECT_THROW(friedman({{1, 2}}), Error);
  EXPECT_THROW(friedman({{1}, {2}}), Error);
  EXPECT_THROW(friedman({{1, 2}, {1, 2, 3}}), Error);
}

TEST(FRace, EliminatesClearlyWorse) {
  CostMatrix m;
  for (int b = 0; b < 8; ++b) m.push_back({1.0 + b, 1.5 + b, 100.0 + b, 200.0 + b});
  const auto keep = frace_survivors(m, 0.05);
  ASSERT_FALSE(keep.empty());
  EXPECT_EQ(keep.front(), 0u);
  EXPECT_EQ(std::count(keep.begin(), keep.end(), 3u), 0);
}

TEST(FRace, KeepsAllWhenNotSignificant) {
  const CostMatrix m = {{1, 2, 3}, {3, 1, 2}, {2, 3, 1}};
  EXPECT_EQ(frace_survivors(m, 0.05), (std::vector<std::size_t>{0, 1, 2}));
}

TEST(ChiSquare, MatchesClosedForms) {
  EXPECT_NEAR(chi_square_sf(6.0, 2.0), std::exp(-3.0), 1e-12);
  EXPECT_NEAR(chi_square_sf(3.84145882069412, 1.0), 0.05, 1e-9);
}

TEST(SignTest, ExactTwoSided) {
  EXPECT_NEAR(sign_test_p_value(9, 1), 22.0 / 1024.0, 1e-15);
  for (int w = 0; w <= 12; ++w) {
    EXPECT_NEAR(sign_test_p_value(w, 12 - w), binomial_two_sided(w, 12 - w), 1e-12) << w;
  }
  EXPECT_EQ(sign_test_p_value(0, 0), 1.0);
}

TEST(Wilcoxon, ExactMatchesEnumeration) {
  const std::vector<double> d = {1.5, -0.3, 2.2, 0.7, 3.1, -1.1, 0.4, 2.8, 1.9, -0.05};
  EXPECT_NEAR(wilcoxon_p_value(d), wilcoxon_enumerated(d), 1e-12);
  const std::vector<double> all_pos = {1, 2, 3, 4, 5, 6};
  EXPECT_NEAR(wilcoxon_p_value(all_pos), 2.0 / 64.0, 1e-12);
}

TEST(Wilcoxon, LargeSampleApproximation) {
  std::vector<double> d;
  for (int i = 1; i <= 40; ++i) d.push_back(i % 5 == 0 ? -i : i);
  // W+ = 820 - 180 = 640; mean 410, variance 40*41*81/24 = 5535.
  const double z = (640.0 - 410.0) / std::sqrt(5535.0);
  const double p = wilcoxon_p_value(d);
  EXPECT_LT(p, 0.01);
  EXPECT_NEAR(p, std::erfc(z / std::sqrt(2.0)), 1e-12);
}

TEST(WinRate, CountsAndStars) {
  const std::vector<double> variant = {1, 1, 1, 1, 1, 1, 1, 1, 1, 5, 3};
  const std::vector<double> baseline = {2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 3};
  const WinRate w = win_rate(variant, baseline);
  EXPECT_EQ(w.wins, 9);
  EXPECT_EQ(w.losses, 1);
  EXPECT_EQ(w.ties, 1);
  EXPECT_NEAR(w.rate_percent, 100.0 * 9 / 11, 1e-12);
  EXPECT_NEAR(w.p_value, 22.0 / 1024.0, 1e-15);
  EXPECT_EQ(w.stars, "*");
  EXPECT_EQ(significance_stars(0.0005), "***");
  EXPECT_EQ(significance_stars(0.005), "**");
  EXPECT_EQ(significance_stars(0.2), "");
  EXPECT_THROW(win_rate({1.0}, {1.0, 2.0}), Error);
}

TEST(ErrorRate, TruncateRowsRoundTotals) {
  EXPECT_DOUBLE_EQ(truncated_percent(2, 30), 6.66);
  EXPECT_DOUBLE_EQ(truncated_percent(1, 35), 2.85);
  EXPECT_DOUBLE_EQ(truncated_percent(4, 30), 13.33);
  EXPECT_DOUBLE_EQ(rounded_percent(21, 315), 6.67);
  EXPECT_DOUBLE_EQ(rounded_percent(2, 30), 6.67);
  EXPECT_DOUBLE_EQ(truncated_percent(0, 0), 0.0);
}

TEST(ErrorRate, RowFromRunLog) {
  const std::string log =
      "{\"event\":\"evolution_start\",\"iteration\":1}\n"
      "{\"event\":\"variant\",\"variant\":\"A1.1\",\"status\":\"Valid\"}\n"
      "{\"event\":\"variant\",\"variant\":\"A1.2\",\"status\":\"CompileFailed\"}\n"
      "{\"event\":\"evaluation\",\"config\":1}\n"
      "{\"event\":\"evolution_start\",\"iteration\":2}\n"
      "{\"event\":\"variant\",\"variant\":\"A2.1\",\"status\":\"Duplicate\"}\n"
      "{\"event\":\"variant\",\"variant\":\"A2.2\",\"status\":\"CompileFailed\"}\n";
  const ErrorRateRow row = error_row_from_run_log("r", log);
  EXPECT_EQ(row.iterations, 2u);
  EXPECT_EQ(row.variants, 4u);
  EXPECT_EQ(row.compile_errors, 2u);
  EXPECT_DOUBLE_EQ(row.error_rate_percent, 50.0);
  EXPECT_THROW(error_row_from_run_log("bad", "{oops\n"), Error);
}

TEST(ErrorRate, TableRendering) {
  const ErrorRateReport rep = error_rate_report({{"1", 4, 6, 30, 0}, {"2", 6, 6, 30, 0}});
  EXPECT_EQ(rep.totals.compile_errors, 10u);
  EXPECT_EQ(rep.totals.variants, 60u);
  EXPECT_DOUBLE_EQ(rep.rows[0].error_rate_percent, 13.33);
  EXPECT_DOUBLE_EQ(rep.totals.error_rate_percent, 16.67);
  EXPECT_NE(rep.to_table().find("16.67"), std::string::npos);
  EXPECT_EQ(rep.to_json()["totals"]["variants"], 60);
}

TEST(CostReport, PerMillionPricing) {
  const PriceTable prices = parse_price_table(R"({"m": {"input": 0.8, "output": 4.0}})");
  const CostReport c = cost_of_tokens(1000000, 500000, prices.at("m"));
  EXPECT_NEAR(c.total_price, 0.8 + 2.0, 1e-12);
  const std::string transcript =
      "{\"event\":\"llm_attempt\"}\n"
      "{\"event\":\"llm_response\",\"model\":\"m\",\"prompt_tokens\":2000,\"completion_tokens\":100}\n"
      "{\"event\":\"llm_response\",\"model\":\"other\",\"prompt_tokens\":10,\"completion_tokens\":10}\n";
  const CostReport r = cost_report(transcript, prices);
  EXPECT_EQ(r.calls, 2u);
  EXPECT_EQ(r.prompt_tokens, 2010u);
  EXPECT_EQ(r.total_tokens(), 2120u);
  EXPECT_NEAR(r.total_price, 2000 * 0.8e-6 + 100 * 4e-6, 1e-15);
  const CostReport empty = cost_report("", prices);
  EXPECT_EQ(empty.calls, 0u);
  EXPECT_EQ(empty.total_price, 0.0);
  EXPECT_THROW(parse_price_table("[1]"), Error);
}

}  // namespace
}  // namespace evoracer
