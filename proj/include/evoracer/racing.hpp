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
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "evoracer/param_space.hpp"

namespace evoracer {

struct Scenario;
class JsonlLog;

using Rng = std::mt19937_64;

inline constexpr const char* kOriginalVariantId = "A0";

// A joint (θ, A) configuration.
struct Configuration {
  std::uint64_t id = 0;
  ParamAssignment theta;
  std::string variant_id = kOriginalVariantId;
  std::uint32_t iteration = 0;  // iteration that created it
};

// Per-parameter sampling distributions.
//
// Numeric parameters draw from a normal around a parent elite's value,
// truncated to the domain; the spread shrinks geometrically by `decay` on each
// update down to sigma_min = sigma_min_fraction × range. Categorical and
// boolean parameters share one probability vector, smoothed toward elite
// frequencies: p' = (1 − lambda)·p + lambda·f.
struct SamplingModel {
  bool uniform = true;
  std::map<std::string, double> spreads;
  std::map<std::string, std::vector<double>> probabilities;  // aligned with ParamDef::values
  std::map<std::string, double> centers;                      // best elite's values
  std::vector<ParamAssignment> parents;                        // best first
  std::vector<double> parent_weights;

  double decay = 0.75;
  double sigma_min_fraction = 0.01;
  double lambda = 0.5;

  static SamplingModel initial(const ParamSpace& space);
  double sigma_min(const ParamDef& def) const;
  bool spreads_at_floor(const ParamSpace& space) const;
  // Throws kInvalidArgument when an invariant is broken.
  void check_invariants(const ParamSpace& space) const;
};

// Samples parameters in declaration order; inactive ones stay absent. The
// uniform model ignores parents.
ParamAssignment sample_assignment(const SamplingModel& model, const ParamSpace& space, Rng& rng);

// `elites` is best first and non-empty.
SamplingModel update_model(const SamplingModel& model, const ParamSpace& space,
                           const std::vector<ParamAssignment>& elites);

// Fresh configurations: each pairs a variant drawn uniformly from
// survived ∪ valid_new ∪ {original_id} with a newly sampled θ. Ids come from
// `next_id`, which is advanced.
std::vector<Configuration> generate_new_configurations(
    const std::set<std::string>& survived, const std::string& original_id,
    const std::set<std::string>& valid_new, const SamplingModel& model, const ParamSpace& space,
    std::size_t target_count, Rng& rng, std::uint64_t& next_id, std::uint32_t iteration = 0);

// 2 + floor(log2(n_params)).
std::uint32_t estimated_iterations(std::size_t n_params);

// Fresh configurations for one iteration given the remaining budget:
//   nbConfigurations − n_elites when set, otherwise
//   max(2, elite_capacity + ceil(remaining / (N_iter × (first_test + each_test)))).
std::uint64_t fresh_configuration_count(const Scenario& scenario, std::size_t n_params,
                                        std::uint64_t remaining, std::size_t n_elites);
// The iteration-1 pool size (no elites yet).
std::uint64_t initial_candidate_count(const Scenario& scenario, std::size_t n_params,
                                      std::uint64_t budget);
// max(fresh × first_test, floor(remaining / max(1, N_iter − t + 1))).
std::uint64_t iteration_budget(std::uint64_t remaining, std::uint32_t iteration,
                               std::uint32_t n_iter, std::uint64_t fresh,
                               std::uint32_t first_test);

struct InstanceRef {
  std::size_t block = 0;
  std::filesystem::path path;
  std::uint64_t seed = 0;
};

// Block k is instance perm[k mod N] with its own seed; the permutation is
// fixed by the run seed.
class InstanceStream {
 public:
  InstanceStream() = default;
  InstanceStream(std::vector<std::filesystem::path> instances, std::uint64_t seed);
  InstanceRef at(std::size_t block) const;
  std::size_t size() const { return instances_.size(); }

 private:
  std::vector<std::filesystem::path> instances_;
  std::vector<std::size_t> perm_;
  std::uint64_t seed_ = 0;
};

// Costs keyed by (configuration id, block): evaluation results never depend
// on completion order and elites are not re-run on blocks they have seen.
class CostCache {
 public:
  std::optional<double> get(std::uint64_t config, std::size_t block) const;
  void put(std::uint64_t config, std::size_t block, double cost);

 private:
  std::map<std::pair<std::uint64_t, std::size_t>, double> costs_;
};

struct RaceState {
  std::uint32_t iteration = 0;
  std::uint64_t experiments_used = 0;
  std::uint64_t max_experiments = 0;

  std::uint64_t remaining() const {
    return max_experiments > experiments_used ? max_experiments - experiments_used : 0;
  }
};

struct RaceSettings {
  std::uint32_t first_test = 5;
  std::uint32_t each_test = 1;
  std::uint32_t elite_capacity = 4;
  double alpha = 0.05;
  unsigned jobs = 1;
};

// Must be thread-safe when jobs > 1. Failures are expressed as penalized
// costs, never exceptions.
using Evaluator = std::function<double(const Configuration&, const InstanceRef&)>;

// Evaluates every configuration of `pool` on `instance` that has no cached
// cost yet. Returns one cost per configuration and charges the executions to
// `state`. Evaluation events are logged in pool order.
std::vector<double> race_step(const std::vector<Configuration>& pool, const InstanceRef& instance,
                              const Evaluator& evaluator, CostCache& cache, RaceState& state,
                              unsigned jobs, JsonlLog* log = nullptr);

struct RankedConfiguration {
  Configuration config;
  double mean_rank = 0.0;
  double mean_cost = 0.0;
  double cost_variance = 0.0;
  std::size_t blocks = 0;
};

struct RaceOutcome {
  std::vector<RankedConfiguration> survivors;  // best first
  std::vector<std::uint64_t> eliminated;
  std::size_t blocks = 0;
  std::uint64_t experiments = 0;
};

// One race: first_test blocks for everyone, then a Friedman test after every
// each_test further blocks. Stops once at most elite_capacity survive, or when
// the next block would overrun the iteration or total budget.
RaceOutcome race(const std::vector<Configuration>& pool, const InstanceStream& stream,
                 const Evaluator& evaluator, CostCache& cache, RaceState& state,
                 std::uint64_t iteration_budget, const RaceSettings& settings,
                 JsonlLog* log = nullptr);

// Ranks configurations over blocks [0, blocks): mean rank, then lower cost
// variance, then lower id.
std::vector<RankedConfiguration> rank_configurations(const std::vector<Configuration>& configs,
                                                     const CostCache& cache, std::size_t blocks);

// Distinct variant ids of the elite pool.
std::set<std::string> survived_variants(const std::vector<Configuration>& elites);

}  // namespace evoracer
