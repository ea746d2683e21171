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

#include "evoracer/config.hpp"
#include "evoracer/error.hpp"
#include "evoracer/racing.hpp"

namespace evoracer {

SamplingModel SamplingModel::initial(const ParamSpace& space) {
  SamplingModel m;
  for (const auto& def : space.params()) {
    if (def.is_numeric()) {
      m.spreads[def.name] = std::max((def.upper - def.lower) / 2.0, m.sigma_min(def));
      m.centers[def.name] = (def.lower + def.upper) / 2.0;
    } else {
      m.probabilities[def.name] =
          std::vector<double>(def.values.size(), 1.0 / static_cast<double>(def.values.size()));
    }
  }
  return m;
}

double SamplingModel::sigma_min(const ParamDef& def) const {
  const double range = def.upper - def.lower;
  // Degenerate intervals still need a positive spread.
  return range > 0.0 ? sigma_min_fraction * range : 1e-12;
}

bool SamplingModel::spreads_at_floor(const ParamSpace& space) const {
  for (const auto& def : space.params()) {
    if (!def.is_numeric()) continue;
    const auto it = spreads.find(def.name);
    if (it == spreads.end() || it->second > sigma_min(def) * (1.0 + 1e-12)) return false;
  }
  return true;
}

void SamplingModel::check_invariants(const ParamSpace& space) const {
  for (const auto& def : space.params()) {
    if (def.is_numeric()) {
      const auto s = spreads.find(def.name);
      if (s == spreads.end() || !(s->second > 0.0)) {
        throw Error(ErrorCode::kInvalidArgument, "spread of " + def.name + " must be > 0");
      }
      const auto c = centers.find(def.name);
      if (c != centers.end() && (c->second < def.lower || c->second > def.upper)) {
        throw Error(ErrorCode::kInvalidArgument, "center of " + def.name + " outside domain");
      }
    } else {
      const auto p = probabilities.find(def.name);
      if (p == probabilities.end() || p->second.size() != def.values.size()) {
        throw Error(ErrorCode::kInvalidArgument, "probabilities of " + def.name + " missing");
      }
      const double sum = std::accumulate(p->second.begin(), p->second.end(), 0.0);
      if (std::fabs(sum - 1.0) > 1e-9) {
        throw Error(ErrorCode::kInvalidArgument, "probabilities of " + def.name + " sum to " +
                                                     std::to_string(sum));
      }
    }
  }
}

namespace {

double truncated_normal(double center, double spread, double lo, double hi, Rng& rng) {
  std::normal_distribution<double> normal(center, spread);
  for (int tries = 0; tries < 64; ++tries) {
    const double v = normal(rng);
    if (v >= lo && v <= hi) return v;
  }
  return std::clamp(center, lo, hi);
}

// Rank weights (E − r + 1) / (E(E+1)/2) for r = 1..E.
std::vector<double> rank_weights(std::size_t n) {
  std::vector<double> w(n);
  const double total = static_cast<double>(n) * static_cast<double>(n + 1) / 2.0;
  for (std::size_t r = 0; r < n; ++r) w[r] = static_cast<double>(n - r) / total;
  return w;
}

}  // namespace

ParamAssignment sample_assignment(const SamplingModel& model, const ParamSpace& space, Rng& rng) {
  const ParamAssignment* parent = nullptr;
  if (!model.uniform && !model.parents.empty()) {
    std::discrete_distribution<std::size_t> pick(model.parent_weights.begin(),
                                                 model.parent_weights.end());
    parent = &model.parents[pick(rng)];
  }

  ParamAssignment out;
  for (const auto& def : space.params()) {
    if (!space.is_active(def, out)) continue;
    if (def.is_numeric()) {
      double v;
      const bool from_model = parent != nullptr;
      if (!from_model) {
        if (def.kind == ParamKind::kInteger) {
          std::uniform_int_distribution<std::int64_t> u(static_cast<std::int64_t>(def.lower),
                                                        static_cast<std::int64_t>(def.upper));
          out.set(def.name, u(rng));
          continue;
        }
        std::uniform_real_distribution<double> u(def.lower, def.upper);
        v = u(rng);
      } else {
        const double center = parent->has(def.name) ? parent->numeric(def.name)
                                                    : model.centers.at(def.name);
        v = truncated_normal(center, model.spreads.at(def.name), def.lower, def.upper, rng);
      }
      if (def.kind == ParamKind::kInteger) {
        out.set(def.name, static_cast<std::int64_t>(std::clamp(std::round(v), def.lower, def.upper)));
      } else {
        out.set(def.name, v);
      }
    } else {
      const auto& probs = model.probabilities.at(def.name);
      std::size_t idx;
      if (model.uniform) {
        std::uniform_int_distribution<std::size_t> u(0, def.values.size() - 1);
        idx = u(rng);
      } else {
        std::discrete_distribution<std::size_t> d(probs.begin(), probs.end());
        idx = d(rng);
      }
      out.set(def.name, def.values[idx]);
    }
  }
  return out;
}

SamplingModel update_model(const SamplingModel& model, const ParamSpace& space,
                           const std::vector<ParamAssignment>& elites) {
  if (elites.empty()) throw Error(ErrorCode::kInvalidArgument, "update_model needs elites");
  SamplingModel next = model;
  next.uniform = false;
  next.parents = elites;
  next.parent_weights = rank_weights(elites.size());

  for (const auto& def : space.params()) {
    if (def.is_numeric()) {
      next.spreads[def.name] = std::max(model.spreads.at(def.name) * model.decay, model.sigma_min(def));
      for (const auto& e : elites) {
        if (e.has(def.name)) {
          next.centers[def.name] = e.numeric(def.name);
          break;
        }
      }
      continue;
    }
    std::vector<double> freq(def.values.size(), 0.0);
    double present = 0.0;
    for (const auto& e : elites) {
      if (!e.has(def.name)) continue;
      const auto& label = std::get<std::string>(e.at(def.name));
      const auto it = std::find(def.values.begin(), def.values.end(), label);
      if (it == def.values.end()) continue;
      freq[static_cast<std::size_t>(it - def.values.begin())] += 1.0;
      present += 1.0;
    }
    if (present == 0.0) continue;
    auto& p = next.probabilities[def.name];
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      p[i] = (1.0 - model.lambda) * p[i] + model.lambda * freq[i] / present;
      sum += p[i];
    }
    for (auto& v : p) v /= sum;
  }
  return next;
}

std::vector<Configuration> generate_new_configurations(
    const std::set<std::string>& survived, const std::string& original_id,
    const std::set<std::string>& valid_new, const SamplingModel& model, const ParamSpace& space,
    std::size_t target_count, Rng& rng, std::uint64_t& next_id, std::uint32_t iteration) {
  if (target_count < 1) {
    throw Error(ErrorCode::kInvalidArgument, "generate_new_configurations needs target_count >= 1");
  }
  std::set<std::string> pool_set = survived;
  pool_set.insert(valid_new.begin(), valid_new.end());
  pool_set.insert(original_id);
  const std::vector<std::string> variants(pool_set.begin(), pool_set.end());

  std::vector<Configuration> out;
  out.reserve(target_count);
  std::uniform_int_distribution<std::size_t> pick(0, variants.size() - 1);
  for (std::size_t i = 0; i < target_count; ++i) {
    Configuration c;
    c.id = next_id++;
    c.variant_id = variants[pick(rng)];
    c.theta = sample_assignment(model, space, rng);
    c.iteration = iteration;
    out.push_back(std::move(c));
  }
  return out;
}

std::uint32_t estimated_iterations(std::size_t n_params) {
  std::uint32_t log2 = 0;
  while ((std::size_t{2} << log2) <= std::max<std::size_t>(n_params, 1)) ++log2;
  return 2 + log2;
}

std::uint64_t fresh_configuration_count(const Scenario& scenario, std::size_t n_params,
                                        std::uint64_t remaining, std::size_t n_elites) {
  if (scenario.nb_configurations) {
    const std::uint64_t nb = *scenario.nb_configurations;
    return nb > n_elites ? nb - n_elites : 1;
  }
  const std::uint64_t per_step =
      std::uint64_t{estimated_iterations(n_params)} * (scenario.first_test + scenario.each_test);
  const std::uint64_t extra = (remaining + per_step - 1) / std::max<std::uint64_t>(per_step, 1);
  return std::max<std::uint64_t>(2, scenario.elite_capacity + extra);
}

std::uint64_t initial_candidate_count(const Scenario& scenario, std::size_t n_params,
                                      std::uint64_t budget) {
  return fresh_configuration_count(scenario, n_params, budget, 0);
}

std::uint64_t iteration_budget(std::uint64_t remaining, std::uint32_t iteration,
                               std::uint32_t n_iter, std::uint64_t fresh,
                               std::uint32_t first_test) {
  const std::int64_t left = static_cast<std::int64_t>(n_iter) - static_cast<std::int64_t>(iteration) + 1;
  const std::uint64_t share = remaining / static_cast<std::uint64_t>(std::max<std::int64_t>(1, left));
  return std::min(remaining, std::max(fresh * first_test, share));
}

std::set<std::string> survived_variants(const std::vector<Configuration>& elites) {
  std::set<std::string> out;
  for (const auto& c : elites) out.insert(c.variant_id);
  return out;
}

}  // namespace evoracer
