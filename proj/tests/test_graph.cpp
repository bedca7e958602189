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

#include <doctest.h>

#include <map>
#include <string>

#include "derivgraph/graph.hpp"
#include "support.hpp"

using namespace derivgraph;

TEST_SUITE("graph") {
  TEST_CASE("add_edge inserts, ignores duplicates and rejects self-loops") {
    DerivationGraph g({"S2.E4", "S2.E8"});
    CHECK(g.add_edge("S2.E4", "S2.E8") == EdgeStatus::added);
    CHECK(g.has_edge("S2.E4", "S2.E8"));
    CHECK(g.add_edge("S2.E4", "S2.E8") == EdgeStatus::duplicate);
    CHECK(g.add_edge("S2.E8", "S2.E8") == EdgeStatus::self_loop);
    CHECK(g.add_edge("S2.E8", "S2.E8", CycleMode::allow) == EdgeStatus::self_loop);
    CHECK(g.edge_count() == 1);
    CHECK(g.successors("S2.E4") == std::vector<std::string>{"S2.E8"});
  }

  TEST_CASE("unknown endpoint names the ID") {
    DerivationGraph g({"a", "b"});
    try {
      g.add_edge("a", "zz");
      FAIL("expected GraphError");
    } catch (const GraphError& e) {
      CHECK(std::string(e.what()).find("zz") != std::string::npos);
    }
    CHECK_THROWS_AS(DerivationGraph({"a", "a"}), GraphError);
  }

  TEST_CASE("reject mode drops the cycle-closing edge") {
    DerivationGraph g({"1", "2", "3"});
    CHECK(g.add_edge("1", "2") == EdgeStatus::added);
    CHECK(g.add_edge("2", "3") == EdgeStatus::added);
    CHECK(g.add_edge("3", "1") == EdgeStatus::closes_cycle);
    CHECK(g.edge_count() == 2);
    CHECK(g.is_acyclic());
  }

  TEST_CASE("prune_cycles keeps the earliest edges") {
    DerivationGraph g({"1", "2", "3"});
    g.add_edge("2", "3", CycleMode::allow);
    g.add_edge("3", "1", CycleMode::allow);
    CHECK(g.add_edge("1", "2", CycleMode::allow) == EdgeStatus::added);
    CHECK_FALSE(g.is_acyclic());
    const auto dropped = g.prune_cycles();
    REQUIRE(dropped.size() == 1);
    CHECK(dropped[0] == std::pair<std::string, std::string>{"1", "2"});
    CHECK(g.is_acyclic());
    CHECK(g.has_edge("2", "3"));
    CHECK(g.has_edge("3", "1"));
  }

  TEST_CASE("roots in document order") {
    const auto g = testing::propagation_graph();
    CHECK(g.roots() == std::vector<std::string>{"S2.E3", "S2.E4", "S3.E7"});
    CHECK(DerivationGraph({"a", "b", "c"}).roots() == std::vector<std::string>{"a", "b", "c"});
    CHECK(testing::graph_of({"1", "2", "3"}, {{"1", "2"}, {"2", "3"}}).roots() ==
          std::vector<std::string>{"1"});
  }

  TEST_CASE("node levels of the ten-equation example") {
    const auto levels = testing::levels_graph().node_level_map();
    const std::map<std::string, int> expected{
        {"S2.E1", 1}, {"S2.E3", 1}, {"S2.E7", 1}, {"S2.E2", 2}, {"S2.E4", 2},
        {"S2.E8", 2}, {"S2.E5", 3}, {"S2.E6", 3}, {"S2.E9", 3}, {"S2.E10", 4}};
    CHECK(levels == expected);
  }

  TEST_CASE("levels of edgeless graphs and chains") {
    CHECK(DerivationGraph({"a", "b"}).node_levels() == std::vector<int>{1, 1});
    const auto chain = testing::graph_of({"a", "b", "c", "d"}, {{"a", "b"}, {"b", "c"}, {"c", "d"}});
    CHECK(chain.node_levels() == std::vector<int>{1, 2, 3, 4});
    const auto cyclic = testing::graph_of({"a", "b"}, {{"a", "b"}, {"b", "a"}});
    CHECK_THROWS_AS(cyclic.node_levels(), GraphError);
    CHECK_THROWS_AS(cyclic.topological_order(), GraphError);
  }

  TEST_CASE("topological order breaks ties by document order") {
    const auto g = testing::graph_of({"a", "b", "c", "d"}, {{"d", "a"}, {"c", "b"}});
    CHECK(g.topological_order() == std::vector<std::size_t>{2, 1, 3, 0});
  }

  TEST_CASE("weak components") {
    const auto g = graph_from_entry(testing::dataset_record());
    const std::vector<std::vector<std::size_t>> expected{{0, 1, 2, 3, 4}, {5}, {6}};
    CHECK(g.weak_components() == expected);
  }

  TEST_CASE("dot output") {
    const auto two = testing::graph_of({"A", "B"}, {{"A", "B"}});
    const std::string dot = to_dot(two);
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("\"A\" -> \"B\";") != std::string::npos);

    const auto g = graph_from_entry(testing::dataset_record());
    const std::string a = to_dot(g, testing::dataset_record().equation_numbers);
    std::size_t arrows = 0;
    for (std::size_t p = a.find(" -> "); p != std::string::npos; p = a.find(" -> ", p + 1)) ++arrows;
    CHECK(g.size() == 7);
    CHECK(g.edge_count() == 4);
    CHECK(arrows == 4);
    CHECK(a.find("label=\"7\"") != std::string::npos);
    CHECK(to_dot(g, testing::dataset_record().equation_numbers) == a);
  }

  TEST_CASE("entry round trip") {
    const auto e = testing::dataset_record();
    const auto g = graph_from_entry(e);
    CHECK(entry_from_graph(g, e.article_id, e.equation_numbers, e.most_important) == e);
  }

  TEST_CASE("equality ignores insertion order") {
    const auto a = testing::graph_of({"x", "y", "z"}, {{"x", "y"}, {"x", "z"}});
    const auto b = testing::graph_of({"x", "y", "z"}, {{"x", "z"}, {"x", "y"}});
    CHECK(a == b);
    CHECK_FALSE(a == testing::graph_of({"x", "y", "z"}, {{"x", "y"}}));
  }
}
