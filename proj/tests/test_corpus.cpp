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

#include <filesystem>
#include <string>

#include <json.hpp>

#include "derivgraph/corpus.hpp"
#include "support.hpp"

using namespace derivgraph;

namespace {

bool names_field(const std::vector<Violation>& v, std::string_view field) {
  for (const auto& x : v) {
    if (x.field == field) return true;
  }
  return false;
}

GroundTruthEntry tiny_entry() {
  GroundTruthEntry e;
  e.article_id = "0000.0001";
  e.equation_ids = {"S1.E1", "S1.E2"};
  e.adjacency = {{"S1.E1", {"S1.E2"}}, {"S1.E2", {}}};
  e.equation_numbers = {{"S1.E1", "1"}, {"S1.E2", "2"}};
  e.most_important = "S1.E2";
  return e;
}

}  // namespace

TEST_SUITE("corpus") {
  TEST_CASE("published record loads with its adjacency and seed") {
    const auto e = testing::dataset_record();
    CHECK(e.article_id == "1409.0466");
    CHECK(e.equation_ids ==
          std::vector<std::string>{"S3.E1", "S3.E2", "S3.E3", "S3.E4", "S3.E5", "S5.E6", "S5.E7"});
    CHECK(e.adjacency.at("S3.E1") == std::vector<std::string>{"S3.E3", "S3.E5"});
    CHECK(e.adjacency.at("S3.E2") == std::vector<std::string>{"S3.E3"});
    CHECK(e.adjacency.at("S3.E4") == std::vector<std::string>{"S3.E5"});
    for (const char* sink : {"S3.E3", "S3.E5", "S5.E6", "S5.E7"}) {
      CHECK(e.adjacency.at(sink).empty());
    }
    CHECK(e.equation_numbers.at("S5.E7") == "7");
    CHECK(e.most_important == "S3.E5");
    CHECK(validate_entry(e).empty());
  }

  TEST_CASE("empty record is valid") {
    const auto v = parse_corpus(R"({"Article ID": "x", "Equation ID": [], "Adjacency List": {},
                                    "Equation Number": {}})");
    REQUIRE(v.size() == 1);
    CHECK(v[0].equation_ids.empty());
    CHECK_FALSE(v[0].most_important);
    CHECK(validate_entry(v[0]).empty());
  }

  TEST_CASE("an added back edge is reported as a cycle") {
    auto j = nlohmann::json::parse(testing::fixture_text("graphs/1409.0466.json"));
    j["Adjacency List"]["S3.E3"] = {"S3.E1"};
    try {
      parse_corpus(j.dump());
      FAIL("expected CorpusError");
    } catch (const CorpusError& err) {
      REQUIRE(err.violations().size() == 1);
      const auto& m = err.violations()[0].message;
      CHECK(m.find("cycle") != std::string::npos);
      CHECK(m.find("S3.E1") != std::string::npos);
      CHECK(m.find("S3.E3") != std::string::npos);
      CHECK(err.violations()[0].article_id == "1409.0466");
    }
  }

  TEST_CASE("seed outside the equation list is one violation") {
    auto e = testing::dataset_record();
    e.most_important = "S9.E9";
    const auto v = validate_entry(e);
    REQUIRE(v.size() == 1);
    CHECK(v[0].field == kFieldMostImportant);
  }

  TEST_CASE("self-loop is a cycle") {
    auto e = testing::dataset_record();
    e.adjacency["S3.E1"].push_back("S3.E1");
    const auto v = validate_entry(e);
    REQUIRE(v.size() == 1);
    CHECK(v[0].message.find("cycle") != std::string::npos);
  }

  TEST_CASE("membership violations name their field") {
    auto e = tiny_entry();
    e.equation_ids.push_back("S1.E1");
    CHECK(names_field(validate_entry(e), kFieldEquationIds));

    e = tiny_entry();
    e.adjacency["S1.E1"].push_back("S7.E7");
    CHECK(names_field(validate_entry(e), kFieldAdjacency));

    e = tiny_entry();
    e.equation_numbers.erase("S1.E2");
    CHECK(names_field(validate_entry(e), kFieldEquationNumbers));

    e = tiny_entry();
    e.adjacency.erase("S1.E2");
    CHECK(names_field(validate_entry(e), kFieldAdjacency));
  }

  TEST_CASE("malformed JSON reports a byte offset") {
    try {
      parse_corpus(R"([{"Article ID": "x",)");
      FAIL("expected ParseError");
    } catch (const ParseError& err) {
      CHECK(err.offset() > 0);
    }
  }

  TEST_CASE("schema violations name field and article") {
    try {
      parse_corpus(R"({"Article ID": "a.1", "Equation ID": "oops", "Adjacency List": {},
                      "Equation Number": {}})");
      FAIL("expected CorpusError");
    } catch (const CorpusError& err) {
      REQUIRE_FALSE(err.violations().empty());
      CHECK(err.violations()[0].article_id == "a.1");
      CHECK(err.violations()[0].field == kFieldEquationIds);
    }
  }

  TEST_CASE("sinks are written back as a single null") {
    const std::vector<GroundTruthEntry> v{tiny_entry()};
    const auto j = nlohmann::json::parse(dump_corpus(v));
    REQUIRE(j.is_array());
    CHECK(j[0]["Adjacency List"]["S1.E2"] == nlohmann::json::parse("[null]"));
    CHECK(j[0]["Most Important Equation"] == "S1.E2");
  }

  TEST_CASE("save and load round trip") {
    const auto dir = std::filesystem::temp_directory_path() / "derivgraph_corpus_test";
    std::filesystem::create_directories(dir);

    const std::vector<GroundTruthEntry> one{testing::dataset_record()};
    save_corpus(one, dir / "one.json");
    CHECK(load_corpus(dir / "one.json") == one);
    // Semantically identical to the published record.
    CHECK(nlohmann::json::parse(read_file(dir / "one.json"))[0] ==
          nlohmann::json::parse(testing::fixture_text("graphs/1409.0466.json")));
    // Stable bytes on a second pass.
    CHECK(dump_corpus(load_corpus(dir / "one.json")) == read_file(dir / "one.json"));

    save_corpus({}, dir / "empty.json");
    CHECK(load_corpus(dir / "empty.json").empty());

    testing::Rng rng(7);
    std::vector<GroundTruthEntry> many;
    for (int k = 0; k < 107; ++k) {
      const auto g = testing::random_dag(rng, testing::uniform(rng, 5, 20), 0.15);
      std::map<std::string, std::string> numbers;
      for (std::size_t i = 0; i < g.size(); ++i) numbers[g.nodes()[i]] = std::to_string(i + 1);
      many.push_back(entry_from_graph(g, fmt::format("2400.{:05}", k), numbers, g.nodes().back()));
    }
    save_corpus(many, dir / "many.json");
    CHECK(load_corpus(dir / "many.json") == many);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("directory load reads every json file in name order") {
    const auto v = load_corpus(testing::fixture("graphs"));
    REQUIRE(v.size() == 3);
    CHECK(v[0].article_id == "1409.0466");
    CHECK(v[1].article_id == "1908.00186");
    CHECK(v[2].article_id == "1908.01505");
  }

  TEST_CASE("missing file is an I/O error") {
    CHECK_THROWS_AS(load_corpus("/nonexistent/corpus.json"), IoError);
  }

  TEST_CASE("fixture corpus statistics stay in the 5-20 range") {
    const auto v = load_corpus(testing::fixture("corpus.json"));
    const auto s = corpus_stats(v);
    CHECK(s.articles == 4);
    CHECK(s.min_equations >= 5);
    CHECK(s.max_equations <= 20);
    CHECK(s.edges == 1 + 8 + 15 + 15);
  }
}
