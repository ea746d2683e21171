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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "evoracer/build_exec.hpp"
#include "evoracer/error.hpp"
#include "evoracer/racing.hpp"
#include "evoracer/run_log.hpp"
#include "evoracer/stats.hpp"

namespace evoracer {
namespace {

// splitmix64 finalizer; decorrelates per-block seeds.
std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

InstanceStream::InstanceStream(std::vector<std::filesystem::path> instances, std::uint64_t seed)
    : instances_(std::move(instances)), seed_(seed) {
  if (instances_.empty()) throw Error(ErrorCode::kInvalidArgument, "no training instances");
  perm_.resize(instances_.size());
  std::iota(perm_.begin(), perm_.end(), 0);
  Rng rng(mix(seed));
  std::shuffle(perm_.begin(), perm_.end(), rng);
}

InstanceRef InstanceStream::at(std::size_t block) const {
  return {block, instances_[perm_[block % perm_.size()]],
          mix(seed_ ^ mix(static_cast<std::uint64_t>(block) + 1)) % 2147483647ULL};
}

std::optional<double> CostCache::get(std::uint64_t config, std::size_t block) const {
  const auto it = costs_.find({config, block});
  if (it == costs_.end()) return std::nullopt;
  return it->second;
}

void CostCache::put(std::uint64_t config, std::size_t block, double cost) {
  costs_[{config, block}] = cost;
}

std::vector<double> race_step(const std::vector<Configuration>& pool, const InstanceRef& instance,
                              const Evaluator& evaluator, CostCache& cache, RaceState& state,
                              unsigned jobs, JsonlLog* log) {
  std::vector<std::size_t> missing;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (!cache.get(pool[i].id, instance.block)) missing.push_back(i);
  }
  if (state.experiments_used + missing.size() > state.max_experiments) {
    throw Error(ErrorCode::kInvalidArgument, "race step would exceed the experiment budget");
  }
  std::vector<double> fresh(missing.size());
  parallel_for(missing.size(), jobs,
               [&](std::size_t m) { fresh[m] = evaluator(pool[missing[m]], instance); });
  for (std::size_t m = 0; m < missing.size(); ++m) {
    const Configuration& c = pool[missing[m]];
    cache.put(c.id, instance.block, fresh[m]);
    ++state.experiments_used;
    if (log != nullptr) {
      log->append("evaluation", {{"iteration", state.iteration},
                                 {"config", c.id},
                                 {"variant", c.variant_id},
                                 {"block", instance.block},
                                 {"instance", instance.path.filename().string()},
                                 {"seed", instance.seed},
                                 {"cost", fresh[m]},
                                 {"experiments_used", state.experiments_used}});
    }
  }
  std::vector<double> costs;
  costs.reserve(pool.size());
  for (const auto& c : pool) costs.push_back(*cache.get(c.id, instance.block));
  return costs;
}

std::vector<RankedConfiguration> rank_configurations(const std::vector<Configuration>& configs,
                                                     const CostCache& cache, std::size_t blocks) {
  std::vector<RankedConfiguration> ranked;
  for (const auto& c : configs) ranked.push_back({c, 0.0, 0.0, 0.0, blocks});
  if (configs.empty()) return ranked;
  for (std::size_t b = 0; b < blocks; ++b) {
    std::vector<double> row;
    for (const auto& c : configs) row.push_back(*cache.get(c.id, b));
    const auto ranks = average_ranks(row);
    for (std::size_t j = 0; j < configs.size(); ++j) {
      ranked[j].mean_rank += ranks[j];
      ranked[j].mean_cost += row[j];
    }
  }
  if (blocks > 0) {
    for (std::size_t j = 0; j < configs.size(); ++j) {
      ranked[j].mean_rank /= static_cast<double>(blocks);
      ranked[j].mean_cost /= static_cast<double>(blocks);
      double var = 0.0;
      for (std::size_t b = 0; b < blocks; ++b) {
        const double d = *cache.get(configs[j].id, b) - ranked[j].mean_cost;
        var += d * d;
      }
      ranked[j].cost_variance = var / static_cast<double>(blocks);
    }
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const RankedConfiguration& a, const RankedConfiguration& b) {
                     if (a.mean_rank != b.mean_rank) return a.mean_rank < b.mean_rank;
                     if (a.cost_variance != b.cost_variance) return a.cost_variance < b.cost_variance;
                     return a.config.id < b.config.id;
                   });
  return ranked;
}

RaceOutcome race(const std::vector<Configuration>& pool, const InstanceStream& stream,
                 const Evaluator& evaluator, CostCache& cache, RaceState& state,
                 std::uint64_t iteration_budget, const RaceSettings& settings, JsonlLog* log) {
  RaceOutcome outcome;
  std::vector<Configuration> alive = pool;
  const std::uint64_t start_used = state.experiments_used;
  // Blocks are unbounded in principle; this only guards a pathological
  // all-cached loop.
  constexpr std::size_t kMaxBlocks = 100000;

  std::size_t b = 0;
  while (!alive.empty() && b < kMaxBlocks) {
    std::size_t needed = 0;
    for (const auto& c : alive) {
      if (!cache.get(c.id, b)) ++needed;
    }
    const std::uint64_t spent = state.experiments_used - start_used;
    if (spent + needed > iteration_budget || state.experiments_used + needed > state.max_experiments) {
      break;
    }
    race_step(alive, stream.at(b), evaluator, cache, state, settings.jobs, log);
    ++b;

    if (b >= settings.first_test && b >= 2 && alive.size() >= 2 &&
        (b - settings.first_test) % std::max<std::uint32_t>(settings.each_test, 1) == 0) {
      CostMatrix matrix;
      for (std::size_t r = 0; r < b; ++r) {
        std::vector<double> row;
        for (const auto& c : alive) row.push_back(*cache.get(c.id, r));
        matrix.push_back(std::move(row));
      }
      const auto keep = frace_survivors(matrix, settings.alpha);
      if (keep.size() < alive.size()) {
        std::vector<Configuration> next;
        std::vector<std::uint64_t> dropped;
        std::size_t k = 0;
        for (std::size_t j = 0; j < alive.size(); ++j) {
          if (k < keep.size() && keep[k] == j) {
            next.push_back(alive[j]);
            ++k;
          } else {
            dropped.push_back(alive[j].id);
          }
        }
        if (log != nullptr) {
          log->append("elimination", {{"iteration", state.iteration},
                                      {"block", b},
                                      {"eliminated", dropped},
                                      {"alive", next.size()}});
        }
        outcome.eliminated.insert(outcome.eliminated.end(), dropped.begin(), dropped.end());
        alive = std::move(next);
      }
    }
    if (b >= settings.first_test && alive.size() <= settings.elite_capacity) break;
  }

  outcome.blocks = b;
  outcome.survivors = rank_configurations(alive, cache, b);
  outcome.experiments = state.experiments_used - start_used;
  return outcome;
}

}  // namespace evoracer
