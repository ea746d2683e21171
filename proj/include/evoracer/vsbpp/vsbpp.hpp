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

// Variable-sized bin packing: instances, packings and the CMSA-lite solver.
//
// Everything the standalone target needs is header-only or defined in
// cmsa_vsbpp.cpp, so an evolved copy of that file builds on its own. Kept
// C++17-clean for the same reason.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace evoracer {
namespace vsbpp {

enum class CostClass { kB1, kB2, kB3 };

inline constexpr std::array<int, 7> kCapacities = {70, 100, 130, 160, 190, 220, 250};
inline constexpr int kMaxWeight = 250;

inline const char* cost_class_name(CostClass c) {
  return c == CostClass::kB1 ? "B1" : c == CostClass::kB2 ? "B2" : "B3";
}

inline bool parse_cost_class(const std::string& text, CostClass* out) {
  if (text == "B1" || text == "b1") *out = CostClass::kB1;
  else if (text == "B2" || text == "b2") *out = CostClass::kB2;
  else if (text == "B3" || text == "b3") *out = CostClass::kB3;
  else return false;
  return true;
}

// B1: W; B2: ceil(10·sqrt(W)); B3: ceil(0.1·W^1.5). Integer arithmetic keeps
// the ceilings exact: the smallest c with c² ≥ 100·W, resp. 1000·c² ≥ W³.
inline int bin_cost(CostClass c, int capacity) {
  if (capacity <= 0) throw std::invalid_argument("bin capacity must be positive");
  const long long w = capacity;
  if (c == CostClass::kB1) return capacity;
  long long guess;
  long long target;
  long long scale;
  if (c == CostClass::kB2) {
    target = 100 * w;
    scale = 1;
    guess = static_cast<long long>(std::sqrt(static_cast<double>(target)));
  } else {
    target = w * w * w;
    scale = 100;
    guess = static_cast<long long>(std::sqrt(static_cast<double>(target) / 100.0));
  }
  // ceil(sqrt(target / scale)): adjust the floating guess by whole steps.
  while (guess > 0 && (guess - 1) * (guess - 1) * scale >= target) --guess;
  while (guess * guess * scale < target) ++guess;
  return static_cast<int>(guess);
}

struct Instance {
  std::vector<int> weights;
  std::vector<int> capacities;
  std::vector<int> costs;

  int num_items() const { return static_cast<int>(weights.size()); }
  int num_bin_types() const { return static_cast<int>(capacities.size()); }
};

// Line 1 `n m`; line 2 `W1 C1 ... Wm Cm`; line 3 `w1 ... wn`.
inline Instance parse_instance(const std::string& text) {
  std::istringstream in(text);
  int n = 0;
  int m = 0;
  if (!(in >> n >> m) || n < 0 || m <= 0) throw std::runtime_error("bad instance header");
  Instance inst;
  inst.capacities.resize(m);
  inst.costs.resize(m);
  for (int k = 0; k < m; ++k) {
    if (!(in >> inst.capacities[k] >> inst.costs[k]) || inst.capacities[k] <= 0 ||
        inst.costs[k] <= 0) {
      throw std::runtime_error("bad bin type " + std::to_string(k + 1));
    }
  }
  inst.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    if (!(in >> inst.weights[i]) || inst.weights[i] <= 0) {
      throw std::runtime_error("bad item weight " + std::to_string(i + 1));
    }
  }
  return inst;
}

inline std::string format_instance(const Instance& inst) {
  std::ostringstream out;
  out << inst.num_items() << ' ' << inst.num_bin_types() << '\n';
  for (int k = 0; k < inst.num_bin_types(); ++k) {
    out << (k ? " " : "") << inst.capacities[k] << ' ' << inst.costs[k];
  }
  out << '\n';
  for (int i = 0; i < inst.num_items(); ++i) out << (i ? " " : "") << inst.weights[i];
  out << '\n';
  return out.str();
}

struct Bin {
  int type = 0;
  std::vector<int> items;
  int load = 0;
};

struct Packing {
  std::vector<Bin> bins;
  long long total_cost = 0;
};

inline long long packing_cost(const Instance& inst, const Packing& p) {
  long long total = 0;
  for (const Bin& b : p.bins) total += inst.costs[b.type];
  return total;
}

// Every item exactly once, loads within capacity, stored cost and loads
// consistent.
inline bool is_feasible(const Instance& inst, const Packing& p, std::string* why = nullptr) {
  auto fail = [&](const std::string& reason) {
    if (why != nullptr) *why = reason;
    return false;
  };
  std::vector<int> seen(inst.weights.size(), 0);
  for (const Bin& b : p.bins) {
    if (b.type < 0 || b.type >= inst.num_bin_types()) return fail("bad bin type");
    long long load = 0;
    for (const int i : b.items) {
      if (i < 0 || i >= inst.num_items()) return fail("bad item index");
      ++seen[i];
      load += inst.weights[i];
    }
    if (load != b.load) return fail("stored load mismatch");
    if (load > inst.capacities[b.type]) return fail("capacity exceeded");
  }
  for (const int s : seen) {
    if (s != 1) return fail("item not packed exactly once");
  }
  if (packing_cost(inst, p) != p.total_cost) return fail("stored cost mismatch");
  return true;
}

enum class Heuristic { kDefault, kBaseline, kH5, kH7 };

inline bool parse_heuristic(const std::string& text, Heuristic* out) {
  if (text == "default") *out = Heuristic::kDefault;
  else if (text == "baseline") *out = Heuristic::kBaseline;
  else if (text == "h5" || text == "H5") *out = Heuristic::kH5;
  else if (text == "h7" || text == "H7") *out = Heuristic::kH7;
  else return false;
  return true;
}

// Arguments of evaluate_placement_quality. current_bin_type is the type of
// the open bin being considered, or −1 when the move opens a new bin;
// new_load is the bin's load after placing the item.
struct PlacementContext {
  int current_bin_type = -1;
  int new_bin_type = 0;
  int new_load = 0;
  int item_weight = 0;
  int item_index = 0;
  const std::vector<int>* bin_costs = nullptr;
  const std::vector<int>* bin_capacities = nullptr;
  const std::vector<int>* item_weights = nullptr;
  int num_items = 0;
  int num_bin_types = 0;
  int remaining_items = 0;
};

// Lower is better. kDefault evaluates the file's own
// evaluate_placement_quality (the evolvable function).
double placement_quality(Heuristic h, const PlacementContext& ctx);

struct CmsaParams {
  int n_constructions = 10;
  int age_limit = 3;
  int greediness_d = 3;
  int iterations = 30;
  double time_limit = 0.0;  // seconds; 0 = none
};

// Items in non-increasing weight order; each placement picks uniformly among
// the greediness_d best moves by placement_quality.
Packing greedy_construct(const Instance& inst, Heuristic h, int greediness_d,
                         std::mt19937_64& rng);

struct Component {
  int type = 0;
  std::vector<int> items;  // sorted
  int age = 0;
};

using ComponentKey = std::pair<int, std::vector<int>>;

class ComponentPool {
 public:
  // Adds every bin of `p` with age 0; an existing identical component keeps
  // the younger age (0).
  void merge(const Packing& p);
  // Resets the ages of `used`, ages every other component, drops those older
  // than age_limit.
  void adapt(const std::vector<ComponentKey>& used, int age_limit);

  const std::map<ComponentKey, Component>& components() const { return components_; }
  std::size_t size() const { return components_.size(); }
  bool contains(const ComponentKey& key) const { return components_.count(key) != 0; }
  int age(const ComponentKey& key) const { return components_.at(key).age; }

 private:
  std::map<ComponentKey, Component> components_;
};

struct SolveResult {
  Packing packing;
  std::vector<ComponentKey> used;  // components the packing was built from
};

// Greedy weighted set cover (cost per newly covered item) with trimming,
// followed by replacement moves: any pool component that can absorb a group
// of bins more cheaply replaces them. Never worse than the best reference.
// Throws std::runtime_error when the pool does not cover every item.
SolveResult solve_subinstance(const ComponentPool& pool, const Instance& inst,
                              const std::vector<Packing>& references);

struct CmsaTrace {
  std::vector<long long> incumbent_cost;  // after each iteration
  std::vector<std::size_t> pool_size;
};

Packing cmsa_solve(const Instance& inst, const CmsaParams& params, Heuristic h,
                   std::uint64_t seed, CmsaTrace* trace = nullptr);

// Lab helpers (not part of the standalone target).
Instance generate_instance(CostClass c, int n, std::uint64_t seed);
// Exact optimum by dynamic programming over item subsets; n ≤ 16.
long long exact_optimum(const Instance& inst);

// Target-runner entry point.
int target_main(int argc, char** argv);

}  // namespace vsbpp
}  // namespace evoracer
