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

// Shared helpers for the test binaries: fixture paths, small HTML
// builders, seeded generators and the reference graphs used throughout.

#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "derivgraph/corpus.hpp"
#include "derivgraph/graph.hpp"

namespace testing {

inline std::filesystem::path fixture(const std::string& rel) {
  return std::filesystem::path(DERIVGRAPH_FIXTURES) / rel;
}

inline std::string fixture_text(const std::string& rel) {
  return derivgraph::read_file(fixture(rel));
}

// A LaTeXML-style numbered display equation.
inline std::string equation_html(const std::string& id, const std::string& number,
                                 const std::string& alttext,
                                 const std::string& mathml = "<mi>x</mi>") {
  return fmt::format(
      "<table id=\"{0}\" class=\"ltx_equation ltx_eqn_table\"><tbody>"
      "<tr class=\"ltx_equation ltx_eqn_row\">"
      "<td class=\"ltx_eqn_cell\"><math id=\"{0}.m1\" alttext=\"{2}\" display=\"block\">"
      "<semantics><mrow>{3}</mrow><annotation encoding=\"application/x-tex\">{2}</annotation>"
      "</semantics></math></td>"
      "<td class=\"ltx_eqn_cell ltx_eqn_eqno\"><span class=\"ltx_tag ltx_tag_equation\">({1})</span></td>"
      "</tr></tbody></table>",
      id, number, alttext, mathml);
}

inline std::string para_html(const std::string& text) {
  return fmt::format("<div class=\"ltx_para\"><p class=\"ltx_p\">{}</p></div>", text);
}

inline std::string page_html(const std::string& body) {
  return "<!DOCTYPE html><html><head><title>t</title></head><body><article>" + body +
         "</article></body></html>";
}

using Rng = std::mt19937_64;

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

inline std::string random_string(Rng& rng, std::size_t max_len, const std::string& alphabet) {
  const std::size_t n = uniform(rng, 0, max_len);
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s += alphabet[uniform(rng, 0, alphabet.size() - 1)];
  return s;
}

inline std::vector<std::string> node_names(std::size_t n, const std::string& prefix = "S1.E") {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(fmt::format("{}{}", prefix, i + 1));
  return out;
}

// Random DAG: edges only from lower to higher index, then nodes shuffled
// so edges also run "backwards" in document order.
inline derivgraph::DerivationGraph random_dag(Rng& rng, std::size_t n, double density) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  const auto names = node_names(n);
  derivgraph::DerivationGraph g(names);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (coin(rng, density)) g.add_edge(names[perm[a]], names[perm[b]], derivgraph::CycleMode::allow);
    }
  }
  return g;
}

// Random forest: every node has at most one parent.
inline derivgraph::DerivationGraph random_forest(Rng& rng, std::size_t n) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  const auto names = node_names(n);
  derivgraph::DerivationGraph g(names);
  for (std::size_t k = 1; k < n; ++k) {
    if (coin(rng, 0.8)) g.add_edge(names[perm[uniform(rng, 0, k - 1)]], names[perm[k]]);
  }
  return g;
}

inline derivgraph::DerivationGraph graph_of(std::vector<std::string> nodes,
                                            const std::vector<std::pair<std::string, std::string>>& edges) {
  derivgraph::DerivationGraph g(std::move(nodes));
  for (const auto& [u, v] : edges) g.add_edge(u, v, derivgraph::CycleMode::allow);
  return g;
}

// Weight-propagation example article (seven equations over two sections).
inline derivgraph::DerivationGraph propagation_graph() {
  return graph_of({"S2.E1", "S2.E2", "S2.E3", "S2.E4", "S3.E5", "S3.E6", "S3.E7"},
                  {{"S2.E3", "S2.E2"}, {"S2.E4", "S2.E2"}, {"S2.E2", "S2.E1"},
                   {"S2.E2", "S3.E5"}, {"S3.E5", "S3.E6"}, {"S3.E7", "S3.E6"}});
}

// Node-level example article (ten equations).
inline derivgraph::DerivationGraph levels_graph() {
  std::vector<std::string> nodes;
  for (int i = 1; i <= 10; ++i) nodes.push_back(fmt::format("S2.E{}", i));
  auto e = [](int a, int b) {
    return std::pair{fmt::format("S2.E{}", a), fmt::format("S2.E{}", b)};
  };
  return graph_of(nodes, {e(1, 2), e(2, 5), e(1, 10), e(7, 8), e(8, 9), e(9, 10), e(3, 10),
                          e(3, 4), e(4, 6)});
}

// The published dataset record.
inline derivgraph::GroundTruthEntry dataset_record() {
  return derivgraph::parse_corpus(fixture_text("graphs/1409.0466.json")).at(0);
}

}  // namespace testing
