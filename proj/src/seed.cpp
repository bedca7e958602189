// Copyright 2026 The derivgraph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "derivgraph/seed.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

namespace derivgraph {

namespace {

constexpr double kTieTolerance = 1e-9;

std::vector<std::size_t> sorted_children(const DerivationGraph& g, std::size_t u) {
  std::vector<std::size_t> c = g.successors(u);
  std::sort(c.begin(), c.end());
  return c;
}

void dfs_visit(const DerivationGraph& g, std::size_t u, WeightMap& w, const SeedConfig& config,
               const DistributionHook& hook) {
  const double amount = distribute(g, u, w, config);
  if (hook) hook(u, amount, w);
  for (std::size_t v : sorted_children(g, u)) dfs_visit(g, v, w, config, hook);
}

bool near_equal(double a, double b) {
  return std::abs(a - b) <= kTieTolerance * std::max(std::abs(a), std::abs(b));
}

std::size_t argmax_among(const WeightMap& w, const std::vector<std::size_t>& members) {
  std::size_t best = members.front();
  for (std::size_t k = 1; k < members.size(); ++k) {
    const std::size_t i = members[k];
    if (w.weights[i] > w.weights[best] || near_equal(w.weights[i], w.weights[best])) best = i;
  }
  return best;
}

}  // namespace

double WeightMap::operator[](std::string_view id) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] == id) return weights[i];
  }
  throw GraphError(fmt::format("unknown node {}", id));
}

double contribution(const DerivationGraph& g, std::size_t node, const SeedConfig& config) {
  const std::size_t out = g.out_degree(node);
  return out > 0 ? static_cast<double>(out) + config.bias : 1.0;
}

WeightMap initialize_weights(const DerivationGraph& g, const SeedConfig& config) {
  WeightMap w;
  w.nodes = g.nodes();
  w.weights.assign(g.size(), 0.0);
  w.total_weight = config.weight_per_equation * static_cast<double>(g.size());
  if (g.size() == 0) return w;
  double sum = 0.0;
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (g.in_degree(v) == 0) sum += contribution(g, v, config);
  }
  // Every non-empty finite graph has a root once it is acyclic; a cyclic
  // one simply starts with no mass.
  if (sum == 0.0) return w;
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (g.in_degree(v) == 0) w.weights[v] = contribution(g, v, config) / sum * w.total_weight;
  }
  return w;
}

double distribute(const DerivationGraph& g, std::size_t node, WeightMap& w,
                  const SeedConfig& config) {
  const auto children = sorted_children(g, node);
  if (children.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t c : children) sum += contribution(g, c, config);
  const double amount = w.weights[node];
  for (std::size_t c : children) w.weights[c] += contribution(g, c, config) / sum * amount;
  return amount;
}

WeightMap update_weights(const DerivationGraph& g, std::string_view node, WeightMap w,
                         const SeedConfig& config) {
  distribute(g, g.index_of(node), w, config);
  return w;
}

WeightMap seed_bfs(const DerivationGraph& g, const SeedConfig& config,
                   const DistributionHook& hook) {
  const std::vector<int> levels = g.node_levels();  // throws on cycles
  WeightMap w = initialize_weights(g, config);
  const int max_level = levels.empty() ? 0 : *std::max_element(levels.begin(), levels.end());
  for (int level = 1; level <= max_level; ++level) {
    for (std::size_t v = 0; v < g.size(); ++v) {
      if (levels[v] != level) continue;
      const double amount = distribute(g, v, w, config);
      if (hook) hook(v, amount, w);
    }
  }
  return w;
}

WeightMap seed_dfs(const DerivationGraph& g, const SeedConfig& config,
                   const DistributionHook& hook) {
  if (!g.is_acyclic()) throw GraphError("graph contains a cycle");
  WeightMap w = initialize_weights(g, config);
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (g.in_degree(v) == 0) dfs_visit(g, v, w, config, hook);
  }
  return w;
}

std::vector<double> likelihoods(const WeightMap& w) {
  double sum = 0.0;
  for (double x : w.weights) sum += x;
  if (!(sum > 0.0)) throw Error("likelihoods need a positive total weight");
  std::vector<double> out;
  out.reserve(w.weights.size());
  for (double x : w.weights) out.push_back(x / sum);
  return out;
}

std::size_t argmax_weight(const WeightMap& w) {
  if (w.empty()) throw Error("no equations to choose from");
  std::vector<std::size_t> all(w.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return argmax_among(w, all);
}

std::string most_important(const WeightMap& w) { return w.nodes[argmax_weight(w)]; }

std::vector<std::string> seed_candidates(const DerivationGraph& g, const SeedConfig& config) {
  if (g.size() == 0) return {};
  const WeightMap bfs = seed_bfs(g, config);
  const WeightMap dfs = seed_dfs(g, config);
  std::set<std::size_t> picked;
  for (const auto& component : g.weak_components()) {
    picked.insert(argmax_among(bfs, component));
    picked.insert(argmax_among(dfs, component));
  }
  std::vector<std::string> out;
  for (std::size_t i : picked) out.push_back(g.nodes()[i]);
  return out;
}

}  // namespace derivgraph
