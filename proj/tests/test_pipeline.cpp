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

#include <string>

#include "derivgraph/corpus.hpp"
#include "derivgraph/pipeline.hpp"
#include "support.hpp"

using namespace derivgraph;

TEST_SUITE("pipeline") {
  TEST_CASE("method names round trip") {
    for (auto name : method_names()) CHECK(method_name(parse_method(name)) == name);
    CHECK(method_names().size() == 7);
    CHECK_THROWS_AS(parse_method("magic"), UsageError);
  }

  TEST_CASE("per-method validation runs before any work") {
    RunConfig c;
    c.method = Method::token_similarity;
    CHECK(c.effective_threshold() == 0.98);
    c.threshold = 1.2;
    CHECK_THROWS_AS(c.validate(), UsageError);
    c.threshold = 0.5;
    c.strictness = 4;
    CHECK_THROWS_AS(c.validate(), UsageError);

    c = {};
    c.method = Method::common_substring;
    c.threshold = -0.1;
    CHECK_THROWS_AS(c.validate(), UsageError);

    c = {};
    c.method = Method::naive_bayes;
    c.train_split = 1.0;
    CHECK_THROWS_AS(c.validate(), UsageError);

    c = {};
    c.jobs = 0;
    CHECK_THROWS_AS(c.validate(), UsageError);

    c = {};
    c.method = Method::llm;
    c.mock_llm = testing::fixture("missing.json");
    c.retries = -1;
    CHECK_THROWS_AS(c.validate(), UsageError);
  }

  TEST_CASE("every analytic method yields a DAG on the fixtures") {
    const auto corpus = load_corpus(testing::fixture("corpus.json"));
    const auto prepared = prepare_corpus(corpus, DirectorySource(testing::fixture("articles")));
    for (Method m : {Method::brute_force, Method::segmentation, Method::common_substring,
                     Method::subtree, Method::token_similarity}) {
      RunConfig c;
      c.method = m;
      const auto ex = make_extractor(c);
      for (const auto& a : prepared.articles) {
        const auto r = ex(a.article);
        CHECK(r.graph.is_acyclic());
        CHECK(r.graph.nodes() == a.truth_graph.nodes());
      }
    }
  }

  TEST_CASE("naive bayes needs a model; the split trains on whole articles") {
    RunConfig c;
    c.method = Method::naive_bayes;
    CHECK_THROWS_AS(make_extractor(c), UsageError);

    const auto corpus = load_corpus(testing::fixture("corpus.json"));
    const auto prepared = prepare_corpus(corpus, DirectorySource(testing::fixture("articles")));
    const auto t = train_on_split(prepared, 0.5, 3);
    CHECK(t.split.train.size() == 2);
    CHECK(t.split.test.size() == 2);
    std::size_t pairs = 0;
    for (const auto& a : prepared.articles) {
      if (std::find(t.split.train.begin(), t.split.train.end(), a.article.article_id) != t.split.train.end()) {
        const std::size_t n = a.article.equations.size();
        pairs += n * (n - 1) / 2;
      }
    }
    CHECK(t.model.class_counts[0] + t.model.class_counts[1] + t.model.class_counts[2] == pairs);
    const auto ex = make_extractor(c, &t.model);
    const auto test = select_articles(prepared, t.split.test);
    CHECK(test.articles.size() == 2);
    for (const auto& a : test.articles) CHECK(ex(a.article).graph.is_acyclic());
  }

  TEST_CASE("llm through recorded replies") {
    const auto dir = std::filesystem::temp_directory_path() / "derivgraph_pipeline_test";
    std::filesystem::create_directories(dir);
    write_file(dir / "replies.json", R"({"1701.00003": ["garbage", "4 -> 8;"]})");
    RunConfig c;
    c.method = Method::llm;
    c.mock_llm = dir / "replies.json";
    const auto ex = make_extractor(c, nullptr, make_transport_factory(c));
    const auto a = parse_article(testing::fixture_text("articles/1701.00003.html"), "1701.00003");
    const auto r = ex(a);
    CHECK(r.graph.edge_names() == std::vector<std::pair<std::string, std::string>>{{"S2.E4", "S2.E8"}});
    const auto other = parse_article(testing::fixture_text("articles/2003.01456.html"), "2003.01456");
    CHECK_THROWS_AS(ex(other), Error);
    std::filesystem::remove_all(dir);
  }
}
