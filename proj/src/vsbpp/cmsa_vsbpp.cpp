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

// CMSA for the variable-sized bin packing problem.
//
// Construct: probabilistic greedy packings driven by evaluate_placement_quality.
// Merge: their bins become solution components of the subinstance.
// Solve: weighted set cover over the components plus replacement moves.
// Adapt: components unused by the Solve result age and eventually leave.
//
// Built two ways: as part of the library (EVORACER_VSBPP_NO_MAIN) and as the
// standalone target, which is also the file the tuner evolves. The tuner only
// ever rewrites evaluate_placement_quality.

#include <vector>
#include <algorithm>
#include <random>
#include <iostream>
#include <fstream>
#include <cmath>
#include <list>
#include <set>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include "evoracer/vsbpp/vsbpp.hpp"

using namespace std;

// Independent function for evaluating placement quality.
// Receives detailed information to implement intelligent evaluation metrics.
// Lower values are better.
double evaluate_placement_quality(int current_bin_type, int new_bin_type, int new_load,
                                  int item_weight, int item_index, const vector<int>& bin_costs,
                                  const vector<int>& bin_capacities,
                                  const vector<int>& item_weights, int num_items,
                                  int num_bin_types, int remaining_items) {
    // Current heuristic: cost/load ratio
    return bin_costs[new_bin_type] / double(new_load);
}

namespace evoracer {
namespace vsbpp {

namespace {

double baseline_quality(const PlacementContext& c) {
  return (*c.bin_costs)[c.new_bin_type] / double(c.new_load);
}

// Dynamic efficiency score: cost efficiency, bin utilization and the number
// of remaining items.
double h5_quality(const PlacementContext& c) {
  const vector<int>& bin_capacities = *c.bin_capacities;
  const vector<int>& bin_costs = *c.bin_costs;
  const int new_bin_type = c.new_bin_type;
  const int new_load = c.new_load;
  const int remaining_items = c.remaining_items;
  double utilization_factor = 1.0 - (double(new_load) / bin_capacities[new_bin_type]);
  double cost_efficiency = bin_costs[new_bin_type] / (new_load + 1.0);
  double remaining_factor = (remaining_items > 0) ? 1.0 / remaining_items : 1.0;
  return cost_efficiency * (1.0 + utilization_factor) * (1.0 + remaining_factor);
}

// Cost efficiency with a utilization bias scaled by the share of items still
// to be placed.
double h7_quality(const PlacementContext& c) {
  const vector<int>& bin_capacities = *c.bin_capacities;
  const vector<int>& bin_costs = *c.bin_costs;
  const int new_bin_type = c.new_bin_type;
  const int new_load = c.new_load;
  const int remaining_items = c.remaining_items;
  const int num_items = c.num_items;
  double base_ratio = bin_costs[new_bin_type] / (new_load + 1e-8);
  double utilization_factor = 1.0 - (new_load / (bin_capacities[new_bin_type] + 1e-8));
  double remaining_pressure = static_cast<double>(remaining_items) / (num_items + 1e-8);
  return base_ratio * (1.0 + utilization_factor * remaining_pressure);
}

struct Move {
  double quality = 0.0;
  int bin = -1;   // index of an open bin, or -1 to open a new one
  int type = 0;   // bin type after the move
};

bool move_less(const Move& a, const Move& b) {
  if (a.quality != b.quality) return a.quality < b.quality;
  // Prefer filling open bins over opening new ones on exact ties.
  if ((a.bin >= 0) != (b.bin >= 0)) return a.bin >= 0;
  if (a.bin != b.bin) return a.bin < b.bin;
  return a.type < b.type;
}

// Items sorted by non-increasing weight; index order breaks ties.
vector<int> placement_order(const Instance& inst) {
  vector<int> order(inst.weights.size());
  iota(order.begin(), order.end(), 0);
  stable_sort(order.begin(), order.end(),
              [&](int a, int b) { return inst.weights[a] > inst.weights[b]; });
  return order;
}

Packing finish(const Instance& inst, vector<Bin> bins) {
  Packing p;
  for (Bin& b : bins) sort(b.items.begin(), b.items.end());
  sort(bins.begin(), bins.end(), [](const Bin& a, const Bin& b) { return a.items < b.items; });
  p.bins = std::move(bins);
  p.total_cost = packing_cost(inst, p);
  return p;
}

}  // namespace

double placement_quality(Heuristic h, const PlacementContext& c) {
  switch (h) {
    case Heuristic::kBaseline:
      return baseline_quality(c);
    case Heuristic::kH5:
      return h5_quality(c);
    case Heuristic::kH7:
      return h7_quality(c);
    case Heuristic::kDefault:
      break;
  }
  return ::evaluate_placement_quality(c.current_bin_type, c.new_bin_type, c.new_load,
                                      c.item_weight, c.item_index, *c.bin_costs,
                                      *c.bin_capacities, *c.item_weights, c.num_items,
                                      c.num_bin_types, c.remaining_items);
}

Packing greedy_construct(const Instance& inst, Heuristic h, int greediness_d,
                         std::mt19937_64& rng) {
  const int d = max(1, greediness_d);
  const vector<int> order = placement_order(inst);
  vector<Bin> bins;
  vector<Move> moves;

  PlacementContext ctx;
  ctx.bin_costs = &inst.costs;
  ctx.bin_capacities = &inst.capacities;
  ctx.item_weights = &inst.weights;
  ctx.num_items = inst.num_items();
  ctx.num_bin_types = inst.num_bin_types();

  for (size_t pos = 0; pos < order.size(); ++pos) {
    const int item = order[pos];
    const int w = inst.weights[item];
    ctx.item_weight = w;
    ctx.item_index = item;
    ctx.remaining_items = static_cast<int>(order.size() - pos - 1);
    moves.clear();

    for (size_t b = 0; b < bins.size(); ++b) {
      const int load = bins[b].load + w;
      if (load > inst.capacities[bins[b].type]) continue;
      ctx.current_bin_type = bins[b].type;
      ctx.new_bin_type = bins[b].type;
      ctx.new_load = load;
      moves.push_back({placement_quality(h, ctx), static_cast<int>(b), bins[b].type});
    }
    for (int k = 0; k < inst.num_bin_types(); ++k) {
      if (inst.capacities[k] < w) continue;
      ctx.current_bin_type = -1;
      ctx.new_bin_type = k;
      ctx.new_load = w;
      moves.push_back({placement_quality(h, ctx), -1, k});
    }
    if (moves.empty()) throw runtime_error("item heavier than every bin capacity");

    // A non-finite score sorts last rather than poisoning the ordering.
    for (Move& m : moves) {
      if (!std::isfinite(m.quality)) m.quality = numeric_limits<double>::max();
    }
    const size_t top = min(moves.size(), static_cast<size_t>(d));
    partial_sort(moves.begin(), moves.begin() + top, moves.end(), move_less);
    size_t pick = 0;
    if (top > 1) {
      uniform_int_distribution<size_t> choose(0, top - 1);
      pick = choose(rng);
    }
    const Move& m = moves[pick];
    if (m.bin >= 0) {
      bins[m.bin].items.push_back(item);
      bins[m.bin].load += w;
    } else {
      Bin nb;
      nb.type = m.type;
      nb.items.push_back(item);
      nb.load = w;
      bins.push_back(std::move(nb));
    }
  }
  return finish(inst, std::move(bins));
}

void ComponentPool::merge(const Packing& p) {
  for (const Bin& b : p.bins) {
    ComponentKey key(b.type, b.items);
    sort(key.second.begin(), key.second.end());
    auto it = components_.find(key);
    if (it != components_.end()) {
      it->second.age = 0;
      continue;
    }
    Component c;
    c.type = key.first;
    c.items = key.second;
    c.age = 0;
    components_.emplace(std::move(key), std::move(c));
  }
}

void ComponentPool::adapt(const std::vector<ComponentKey>& used, int age_limit) {
  const set<ComponentKey> in_use(used.begin(), used.end());
  for (auto it = components_.begin(); it != components_.end();) {
    if (in_use.count(it->first)) {
      it->second.age = 0;
    } else {
      ++it->second.age;
    }
    if (it->second.age > age_limit) {
      it = components_.erase(it);
    } else {
      ++it;
    }
  }
}

SolveResult solve_subinstance(const ComponentPool& pool, const Instance& inst,
                              const std::vector<Packing>& references) {
  const int n = inst.num_items();
  vector<const Component*> comps;
  vector<ComponentKey> keys;
  for (const auto& kv : pool.components()) {
    comps.push_back(&kv.second);
    keys.push_back(kv.first);
  }
  {
    vector<char> covered(n, 0);
    for (const Component* c : comps) {
      for (const int i : c->items) covered[i] = 1;
    }
    for (int i = 0; i < n; ++i) {
      if (!covered[i]) throw runtime_error("component pool does not cover item " + to_string(i));
    }
  }

  // Greedy cover: cheapest cost per newly covered item, trimming items that an
  // earlier bin already holds.
  vector<char> covered(n, 0);
  int left = n;
  vector<Bin> bins;
  vector<int> origin;  // component index per bin
  vector<char> taken(comps.size(), 0);
  while (left > 0) {
    int best = -1;
    double best_ratio = numeric_limits<double>::infinity();
    int best_new = 0;
    for (size_t c = 0; c < comps.size(); ++c) {
      if (taken[c]) continue;
      int fresh = 0;
      for (const int i : comps[c]->items) fresh += covered[i] ? 0 : 1;
      if (fresh == 0) continue;
      const double ratio = inst.costs[comps[c]->type] / double(fresh);
      if (ratio < best_ratio || (ratio == best_ratio && fresh > best_new)) {
        best_ratio = ratio;
        best = static_cast<int>(c);
        best_new = fresh;
      }
    }
    taken[best] = 1;
    Bin b;
    b.type = comps[best]->type;
    for (const int i : comps[best]->items) {
      if (covered[i]) continue;
      covered[i] = 1;
      --left;
      b.items.push_back(i);
      b.load += inst.weights[i];
    }
    bins.push_back(std::move(b));
    origin.push_back(best);
  }

  // Replacement moves: a component that holds every item of a group of bins
  // replaces the group when it is cheaper (1-for-1 downgrades and k-for-1
  // merges alike). Each accepted move strictly lowers the cost.
  bool improved = true;
  int passes = 0;
  while (improved && passes++ < 50) {
    improved = false;
    vector<int> bin_of(n, -1);
    for (size_t b = 0; b < bins.size(); ++b) {
      for (const int i : bins[b].items) bin_of[i] = static_cast<int>(b);
    }
    for (size_t c = 0; c < comps.size() && !improved; ++c) {
      // Bins fully contained in component c.
      map<int, int> hits;
      for (const int i : comps[c]->items) ++hits[bin_of[i]];
      long long group_cost = 0;
      vector<int> group;
      for (const auto& h : hits) {
        if (h.second == static_cast<int>(bins[h.first].items.size())) {
          group.push_back(h.first);
          group_cost += inst.costs[bins[h.first].type];
        }
      }
      if (group.empty() || group_cost <= inst.costs[comps[c]->type]) continue;
      Bin merged;
      merged.type = comps[c]->type;
      for (const int g : group) {
        merged.items.insert(merged.items.end(), bins[g].items.begin(), bins[g].items.end());
        merged.load += bins[g].load;
      }
      vector<Bin> next;
      vector<int> next_origin;
      for (size_t b = 0; b < bins.size(); ++b) {
        if (find(group.begin(), group.end(), static_cast<int>(b)) != group.end()) continue;
        next.push_back(std::move(bins[b]));
        next_origin.push_back(origin[b]);
      }
      next.push_back(std::move(merged));
      next_origin.push_back(static_cast<int>(c));
      bins = std::move(next);
      origin = std::move(next_origin);
      improved = true;
    }
  }

  SolveResult result;
  result.packing = finish(inst, bins);
  for (const int o : origin) result.used.push_back(keys[o]);

  // The cover is a heuristic; never return worse than a merged solution.
  const Packing* best_ref = nullptr;
  for (const Packing& r : references) {
    if (best_ref == nullptr || r.total_cost < best_ref->total_cost) best_ref = &r;
  }
  if (best_ref != nullptr && best_ref->total_cost < result.packing.total_cost) {
    result.packing = *best_ref;
    result.used.clear();
    for (const Bin& b : best_ref->bins) result.used.emplace_back(b.type, b.items);
  }
  return result;
}

Packing cmsa_solve(const Instance& inst, const CmsaParams& params, Heuristic h,
                   std::uint64_t seed, CmsaTrace* trace) {
  const auto started = chrono::steady_clock::now();
  auto elapsed = [&] {
    return chrono::duration<double>(chrono::steady_clock::now() - started).count();
  };
  std::mt19937_64 rng(seed);
  ComponentPool pool;
  Packing incumbent;
  bool have = false;
  const int iterations = max(1, params.iterations);
  const int constructions = max(1, params.n_constructions);

  for (int it = 0; it < iterations; ++it) {
    // Construct + Merge.
    vector<Packing> built;
    for (int c = 0; c < constructions; ++c) {
      built.push_back(greedy_construct(inst, h, params.greediness_d, rng));
      pool.merge(built.back());
    }
    // Solve.
    SolveResult solved = solve_subinstance(pool, inst, built);
    if (!have || solved.packing.total_cost < incumbent.total_cost) {
      incumbent = solved.packing;
      have = true;
    }
    // Adapt.
    pool.adapt(solved.used, params.age_limit);
    if (trace != nullptr) {
      trace->incumbent_cost.push_back(incumbent.total_cost);
      trace->pool_size.push_back(pool.size());
    }
    // The time limit is a safety stop; the iteration count is the budget.
    if (params.time_limit > 0.0 && elapsed() > 0.9 * params.time_limit) break;
  }
  return incumbent;
}

namespace {

struct Args {
  string instance;
  std::uint64_t seed = 0;
  double time_limit = 0.0;
  CmsaParams params;
  Heuristic heuristic = Heuristic::kDefault;
};

bool parse_int(const char* text, long long lo, long long hi, long long* out) {
  char* end = nullptr;
  const long long v = strtoll(text, &end, 10);
  if (end == text || *end != '\0' || v < lo || v > hi) return false;
  *out = v;
  return true;
}

bool parse_args(int argc, char** argv, Args* a, string* error) {
  for (int i = 1; i < argc; ++i) {
    // Parameter files may spell names with underscores.
    string flag = argv[i];
    replace(flag.begin() + min<size_t>(2, flag.size()), flag.end(), '_', '-');
    if (i + 1 >= argc) {
      *error = "missing value for " + flag;
      return false;
    }
    const char* value = argv[++i];
    long long v = 0;
    if (flag == "--instance") {
      a->instance = value;
    } else if (flag == "--seed") {
      char* end = nullptr;
      a->seed = strtoull(value, &end, 10);
      if (end == value || *end != '\0') {
        *error = "bad --seed";
        return false;
      }
    } else if (flag == "--time-limit") {
      char* end = nullptr;
      a->time_limit = strtod(value, &end);
      if (end == value || *end != '\0' || !(a->time_limit >= 0.0)) {
        *error = "bad --time-limit";
        return false;
      }
      a->params.time_limit = a->time_limit;
    } else if (flag == "--n-constructions") {
      if (!parse_int(value, 1, 1000, &v)) {
        *error = "bad --n-constructions";
        return false;
      }
      a->params.n_constructions = static_cast<int>(v);
    } else if (flag == "--age-limit") {
      if (!parse_int(value, 0, 1000, &v)) {
        *error = "bad --age-limit";
        return false;
      }
      a->params.age_limit = static_cast<int>(v);
    } else if (flag == "--greediness-d") {
      if (!parse_int(value, 1, 1000, &v)) {
        *error = "bad --greediness-d";
        return false;
      }
      a->params.greediness_d = static_cast<int>(v);
    } else if (flag == "--iterations") {
      if (!parse_int(value, 1, 1000000, &v)) {
        *error = "bad --iterations";
        return false;
      }
      a->params.iterations = static_cast<int>(v);
    } else if (flag == "--heuristic") {
      if (!parse_heuristic(value, &a->heuristic)) {
        *error = string("unknown heuristic ") + value;
        return false;
      }
    } else {
      *error = "unknown flag " + flag;
      return false;
    }
  }
  if (a->instance.empty()) {
    *error = "--instance is required";
    return false;
  }
  return true;
}

}  // namespace

int target_main(int argc, char** argv) {
  Args args;
  string error;
  if (!parse_args(argc, argv, &args, &error)) {
    cerr << "evoracer-vsbpp: " << error << "\n";
    return 2;
  }
  ifstream in(args.instance);
  if (!in) {
    cerr << "evoracer-vsbpp: cannot read " << args.instance << "\n";
    return 2;
  }
  stringstream buffer;
  buffer << in.rdbuf();
  try {
    const Instance inst = parse_instance(buffer.str());
    const Packing best = cmsa_solve(inst, args.params, args.heuristic, args.seed);
    string why;
    if (!is_feasible(inst, best, &why)) {
      cerr << "evoracer-vsbpp: infeasible packing: " << why << "\n";
      return 3;
    }
    cout << "COST " << best.total_cost << "\n";
  } catch (const exception& e) {
    cerr << "evoracer-vsbpp: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace vsbpp
}  // namespace evoracer

#ifndef EVORACER_VSBPP_NO_MAIN
int main(int argc, char** argv) { return evoracer::vsbpp::target_main(argc, argv); }
#endif
