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

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "derivgraph/corpus.hpp"
#include "derivgraph/error.hpp"

namespace derivgraph {

enum class CycleMode { reject, allow };

enum class EdgeStatus { added, duplicate, self_loop, closes_cycle };

/// Directed graph over equation IDs. An edge u -> v means v was derived
/// from u. Nodes keep document order; successor lists keep insertion order.
class DerivationGraph {
 public:
  DerivationGraph() = default;
  explicit DerivationGraph(std::vector<std::string> nodes);

  /// Unknown endpoints throw GraphError. In reject mode an edge that would
  /// close a cycle is not inserted.
  EdgeStatus add_edge(std::string_view u, std::string_view v,
                      CycleMode mode = CycleMode::reject);

  /// Drop edges that close a cycle, replaying insertions in order so the
  /// earliest edges survive. Returns the dropped edges.
  std::vector<std::pair<std::string, std::string>> prune_cycles();

  const std::vector<std::string>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t edge_count() const { return log_.size(); }
  bool contains(std::string_view id) const;
  std::size_t index_of(std::string_view id) const;  // throws if unknown

  bool has_edge(std::string_view u, std::string_view v) const;
  const std::vector<std::size_t>& successors(std::size_t u) const { return succ_[u]; }
  const std::vector<std::size_t>& predecessors(std::size_t v) const { return pred_[v]; }
  std::vector<std::string> successors(std::string_view u) const;
  std::size_t in_degree(std::size_t v) const { return pred_[v].size(); }
  std::size_t out_degree(std::size_t u) const { return succ_[u].size(); }

  /// Edges sorted by (source index, target index).
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;
  std::vector<std::pair<std::string, std::string>> edge_names() const;

  bool is_acyclic() const;
  std::vector<std::string> roots() const;
  /// Level 1 for roots, otherwise 1 + max parent level. Throws on cycles.
  std::vector<int> node_levels() const;
  std::map<std::string, int> node_level_map() const;
  /// Kahn order, ties resolved by document order. Throws on cycles.
  std::vector<std::size_t> topological_order() const;
  /// Weakly connected components, each listed in document order; components
  /// ordered by their first node.
  std::vector<std::vector<std::size_t>> weak_components() const;

  bool operator==(const DerivationGraph& other) const;

 private:
  bool reaches(std::size_t from, std::size_t to) const;
  void insert(std::size_t u, std::size_t v);

  std::vector<std::string> nodes_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::size_t>> succ_;
  std::vector<std::vector<std::size_t>> pred_;
  std::vector<std::pair<std::size_t, std::size_t>> log_;  // insertion order
};

/// Deterministic Graphviz digraph. `labels` maps node IDs to display text;
/// nodes without one are labeled by their ID.
std::string to_dot(const DerivationGraph& g,
                   const std::map<std::string, std::string>& labels = {},
                   std::string_view name = "derivation");

/// Graph of a corpus entry, edges inserted in adjacency order (allow mode).
DerivationGraph graph_from_entry(const GroundTruthEntry& entry);

/// Corpus-schema record for a predicted graph.
GroundTruthEntry entry_from_graph(const DerivationGraph& g, std::string article_id,
                                  const std::map<std::string, std::string>& numbers,
                                  std::optional<std::string> most_important = {});

}  // namespace derivgraph
