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

// Instance generation and a brute-force optimum for small instances.

#include <algorithm>
#include <cstdio>
#include <limits>
#include <random>

#include "evoracer/error.hpp"
#include "evoracer/util.hpp"
#include "evoracer/vsbpp/lab.hpp"
#include "evoracer/vsbpp/vsbpp.hpp"

namespace evoracer {
namespace vsbpp {

Instance generate_instance(CostClass c, int n, std::uint64_t seed) {
  if (n <= 0) throw std::invalid_argument("instance size must be positive");
  Instance inst;
  for (const int cap : kCapacities) {
    inst.capacities.push_back(cap);
    inst.costs.push_back(bin_cost(c, cap));
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> weight(1, kMaxWeight);
  inst.weights.reserve(n);
  for (int i = 0; i < n; ++i) inst.weights.push_back(weight(rng));
  return inst;
}

long long exact_optimum(const Instance& inst) {
  const int n = inst.num_items();
  if (n > 16) throw std::invalid_argument("exact_optimum supports at most 16 items");
  const std::size_t full = std::size_t{1} << n;
  // Cheapest single bin for each subset (or "none fits").
  constexpr long long kNone = std::numeric_limits<long long>::max() / 4;
  std::vector<long long> single(full, kNone);
  std::vector<long long> load(full, 0);
  for (std::size_t s = 1; s < full; ++s) {
    const int low = __builtin_ctzll(s);
    load[s] = load[s & (s - 1)] + inst.weights[low];
    for (int k = 0; k < inst.num_bin_types(); ++k) {
      if (inst.capacities[k] >= load[s]) single[s] = std::min<long long>(single[s], inst.costs[k]);
    }
  }
  std::vector<long long> best(full, kNone);
  best[0] = 0;
  for (std::size_t s = 1; s < full; ++s) {
    // The bin holding the lowest item ranges over subsets containing it.
    const std::size_t low = s & (~s + 1);
    const std::size_t rest = s ^ low;
    for (std::size_t sub = rest;; sub = (sub - 1) & rest) {
      const std::size_t bin = sub | low;
      if (single[bin] < kNone && best[s ^ bin] < kNone) {
        best[s] = std::min(best[s], single[bin] + best[s ^ bin]);
      }
      if (sub == 0) break;
    }
  }
  if (best[full - 1] >= kNone) throw std::runtime_error("an item fits in no bin type");
  return best[full - 1];
}

nlohmann::json write_instance_set(CostClass c, const std::vector<int>& sizes, unsigned count,
                                  std::uint64_t seed, const std::filesystem::path& out_dir) {
  for (const int n : sizes) {
    if (n <= 0) throw Error(ErrorCode::kRangeViolation, "instance sizes must be positive");
  }
  std::filesystem::create_directories(out_dir);
  std::mt19937_64 seeds(seed);
  nlohmann::json files = nlohmann::json::array();
  for (const int n : sizes) {
    for (unsigned k = 0; k < count; ++k) {
      const std::uint64_t file_seed = seeds();
      char name[64];
      std::snprintf(name, sizeof name, "%s_n%d_%02u.txt", cost_class_name(c), n, k + 1);
      write_text_file(out_dir / name, format_instance(generate_instance(c, n, file_seed)));
      files.push_back({{"file", name}, {"n", n}, {"index", k + 1}, {"seed", file_seed}});
    }
  }
  nlohmann::json manifest = {{"class", cost_class_name(c)},
                             {"sizes", sizes},
                             {"count", count},
                             {"seed", seed},
                             {"capacities", kCapacities},
                             {"files", files}};
  write_text_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
  return manifest;
}

}  // namespace vsbpp
}  // namespace evoracer
