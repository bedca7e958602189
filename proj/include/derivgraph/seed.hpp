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

// Seed (most important) equation search by weight propagation. Roots share
// the total mass in proportion to their contributions; a distributing node
// keeps its own weight and hands the same amount to its children, split by
// their contributions. A node's contribution is out-degree + bias when it
// has children and 1 otherwise.

#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "derivgraph/graph.hpp"

namespace derivgraph {

struct SeedConfig {
  double bias = 1.0;
  double weight_per_equation = 10.0;
};

struct WeightMap {
  std::vector<std::string> nodes;  // document order
  std::vector<double> weights;     // parallel to nodes
  double total_weight = 0.0;

  double operator[](std::string_view id) const;  // throws GraphError if unknown
  std::size_t size() const { return nodes.size(); }
  bool empty() const { return nodes.empty(); }
};

double contribution(const DerivationGraph& g, std::size_t node, const SeedConfig& config = {});

/// Root masses; non-roots start at 0. An empty graph gives an empty map.
WeightMap initialize_weights(const DerivationGraph& g, const SeedConfig& config = {});

/// Distribute w[node] over node's children in place; returns the amount
/// handed out (0 for a leaf).
double distribute(const DerivationGraph& g, std::size_t node, WeightMap& w,
                  const SeedConfig& config = {});

WeightMap update_weights(const DerivationGraph& g, std::string_view node, WeightMap w,
                         const SeedConfig& config = {});

/// Called after every distribution with the node and the amount it handed
/// out; sinks report 0.
using DistributionHook = std::function<void(std::size_t node, double amount, const WeightMap&)>;

/// Level by level, document order within a level; every node distributes
/// once. Throws GraphError on cycles.
WeightMap seed_bfs(const DerivationGraph& g, const SeedConfig& config = {},
                   const DistributionHook& hook = {});

/// Depth-first from each root in document order. A node distributes its
/// whole current weight every time it is reached, so descendants of nodes
/// with several parents receive mass more than once.
WeightMap seed_dfs(const DerivationGraph& g, const SeedConfig& config = {},
                   const DistributionHook& hook = {});

/// Weights normalized to sum to 1; all-zero weights throw Error.
std::vector<double> likelihoods(const WeightMap& w);

/// Index of the heaviest node; near-equal weights (relative 1e-9) go to the
/// later node. Throws Error on an empty map.
std::size_t argmax_weight(const WeightMap& w);
std::string most_important(const WeightMap& w);

/// Per weakly connected component, the argmax under BFS and under DFS;
/// union in document order.
std::vector<std::string> seed_candidates(const DerivationGraph& g, const SeedConfig& config = {});

}  // namespace derivgraph
