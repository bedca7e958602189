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

#include "derivgraph/graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

#include <fmt/format.h>

namespace derivgraph {

DerivationGraph::DerivationGraph(std::vector<std::string> nodes)
    : nodes_(std::move(nodes)), succ_(nodes_.size()), pred_(nodes_.size()) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!index_.emplace(nodes_[i], i).second) {
      throw GraphError(fmt::format("duplicate node {}", nodes_[i]));
    }
  }
}

bool DerivationGraph::contains(std::string_view id) const {
  return index_.count(std::string(id)) > 0;
}

std::size_t DerivationGraph::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) throw GraphError(fmt::format("unknown node {}", id));
  return it->second;
}

bool DerivationGraph::reaches(std::size_t from, std::size_t to) const {
  std::vector<char> seen(nodes_.size(), 0);
  std::vector<std::size_t> stack{from};
  seen[from] = 1;
  while (!stack.empty()) {
    std::size_t u = stack.back();
    stack.pop_back();
    if (u == to) return true;
    for (std::size_t w : succ_[u]) {
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  return false;
}

void DerivationGraph::insert(std::size_t u, std::size_t v) {
  succ_[u].push_back(v);
  pred_[v].push_back(u);
  log_.emplace_back(u, v);
}

EdgeStatus DerivationGraph::add_edge(std::string_view u, std::string_view v,
                                     CycleMode mode) {
  const std::size_t a = index_of(u);
  const std::size_t b = index_of(v);
  if (a == b) return EdgeStatus::self_loop;
  if (std::find(succ_[a].begin(), succ_[a].end(), b) != succ_[a].end())
    return EdgeStatus::duplicate;
  if (mode == CycleMode::reject && reaches(b, a)) return EdgeStatus::closes_cycle;
  insert(a, b);
  return EdgeStatus::added;
}

std::vector<std::pair<std::string, std::string>> DerivationGraph::prune_cycles() {
  auto log = std::move(log_);
  log_.clear();
  for (auto& s : succ_) s.clear();
  for (auto& p : pred_) p.clear();
  std::vector<std::pair<std::string, std::string>> dropped;
  for (auto [u, v] : log) {
    if (reaches(v, u)) {
      dropped.emplace_back(nodes_[u], nodes_[v]);
    } else {
      insert(u, v);
    }
  }
  return dropped;
}

bool DerivationGraph::has_edge(std::string_view u, std::string_view v) const {
  auto iu = index_.find(std::string(u));
  auto iv = index_.find(std::string(v));
  if (iu == index_.end() || iv == index_.end()) return false;
  const auto& s = succ_[iu->second];
  return std::find(s.begin(), s.end(), iv->second) != s.end();
}

std::vector<std::string> DerivationGraph::successors(std::string_view u) const {
  std::vector<std::string> out;
  for (std::size_t v : succ_[index_of(u)]) out.push_back(nodes_[v]);
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> DerivationGraph::edges() const {
  auto out = log_;
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<std::string, std::string>> DerivationGraph::edge_names() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (auto [u, v] : edges()) out.emplace_back(nodes_[u], nodes_[v]);
  return out;
}

std::vector<std::size_t> DerivationGraph::topological_order() const {
  std::vector<std::size_t> indeg(nodes_.size());
  for (std::size_t v = 0; v < nodes_.size(); ++v) indeg[v] = pred_[v].size();
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t v = 0; v < nodes_.size(); ++v) {
    if (indeg[v] == 0) ready.push(v);
  }
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    std::size_t u = ready.top();
    ready.pop();
    order.push_back(u);
    for (std::size_t w : succ_[u]) {
      if (--indeg[w] == 0) ready.push(w);
    }
  }
  if (order.size() != nodes_.size()) throw GraphError("graph contains a cycle");
  return order;
}

bool DerivationGraph::is_acyclic() const {
  try {
    topological_order();
    return true;
  } catch (const GraphError&) {
    return false;
  }
}

std::vector<std::string> DerivationGraph::roots() const {
  std::vector<std::string> out;
  for (std::size_t v = 0; v < nodes_.size(); ++v) {
    if (pred_[v].empty()) out.push_back(nodes_[v]);
  }
  return out;
}

std::vector<int> DerivationGraph::node_levels() const {
  std::vector<int> level(nodes_.size(), 1);
  for (std::size_t u : topological_order()) {
    for (std::size_t w : succ_[u]) level[w] = std::max(level[w], level[u] + 1);
  }
  return level;
}

std::map<std::string, int> DerivationGraph::node_level_map() const {
  auto levels = node_levels();
  std::map<std::string, int> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) out.emplace(nodes_[i], levels[i]);
  return out;
}

std::vector<std::vector<std::size_t>> DerivationGraph::weak_components() const {
  std::vector<std::size_t> parent(nodes_.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [u, v] : log_) {
    std::size_t a = find(u), b = find(v);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> slot(nodes_.size(), nodes_.size());
  for (std::size_t v = 0; v < nodes_.size(); ++v) {
    std::size_t r = find(v);
    if (slot[r] == nodes_.size()) {
      slot[r] = out.size();
      out.emplace_back();
    }
    out[slot[r]].push_back(v);
  }
  return out;
}

bool DerivationGraph::operator==(const DerivationGraph& other) const {
  return nodes_ == other.nodes_ && edges() == other.edges();
}

namespace {

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string to_dot(const DerivationGraph& g,
                   const std::map<std::string, std::string>& labels,
                   std::string_view name) {
  std::string out = fmt::format("digraph {} {{\n", dot_quote(name));
  out += "  rankdir=TB;\n";
  out += "  node [shape=box];\n";
  for (const auto& n : g.nodes()) {
    auto it = labels.find(n);
    out += fmt::format("  {} [label={}];\n", dot_quote(n),
                       dot_quote(it == labels.end() ? n : it->second));
  }
  for (const auto& [u, v] : g.edge_names()) {
    out += fmt::format("  {} -> {};\n", dot_quote(u), dot_quote(v));
  }
  out += "}\n";
  return out;
}

DerivationGraph graph_from_entry(const GroundTruthEntry& entry) {
  DerivationGraph g(entry.equation_ids);
  for (const auto& id : entry.equation_ids) {
    auto it = entry.adjacency.find(id);
    if (it == entry.adjacency.end()) continue;
    for (const auto& target : it->second) g.add_edge(id, target, CycleMode::allow);
  }
  return g;
}

GroundTruthEntry entry_from_graph(const DerivationGraph& g, std::string article_id,
                                  const std::map<std::string, std::string>& numbers,
                                  std::optional<std::string> most_important) {
  GroundTruthEntry e;
  e.article_id = std::move(article_id);
  e.equation_ids = g.nodes();
  for (std::size_t u = 0; u < g.size(); ++u) {
    std::vector<std::size_t> targets = g.successors(u);
    std::sort(targets.begin(), targets.end());
    auto& list = e.adjacency[g.nodes()[u]];
    for (std::size_t v : targets) list.push_back(g.nodes()[v]);
    auto it = numbers.find(g.nodes()[u]);
    e.equation_numbers[g.nodes()[u]] = it == numbers.end() ? g.nodes()[u] : it->second;
  }
  e.most_important = std::move(most_important);
  return e;
}

}  // namespace derivgraph
