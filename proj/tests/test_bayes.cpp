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

#include <cmath>
#include <set>
#include <string>

#include "derivgraph/bayes.hpp"
#include "derivgraph/ingest.hpp"
#include "support.hpp"

using namespace derivgraph;
using testing::equation_html;
using testing::page_html;
using testing::para_html;

namespace {

PairSample doc(int label, std::string text) { return {"a", 0, 1, label, std::move(text)}; }

ParsedArticle article_with(const std::vector<std::string>& ids) {
  std::string body;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    body += para_html(fmt::format("Words {} here", i));
    body += equation_html(ids[i], std::to_string(i + 1), fmt::format("v_{}", i));
  }
  return parse_article(page_html(body), "1409.0466");
}

}  // namespace

TEST_SUITE("bayes") {
  TEST_CASE("pair counts") {
    const auto rec = testing::dataset_record();
    const auto a = article_with(rec.equation_ids);
    const auto pairs = build_pairs(a, rec);
    CHECK(pairs.size() == 21);
    CHECK(build_pairs(article_with({"S1.E1"})).empty());
    // Lexicographic (i, j) order.
    for (std::size_t k = 1; k < pairs.size(); ++k) {
      CHECK(std::pair{pairs[k - 1].i, pairs[k - 1].j} < std::pair{pairs[k].i, pairs[k].j});
    }
  }

  TEST_CASE("labels follow the ground-truth edges") {
    const auto rec = testing::dataset_record();
    const auto pairs = build_pairs(article_with(rec.equation_ids), rec);
    auto label_of = [&](std::size_t i, std::size_t j) {
      for (const auto& p : pairs) {
        if (p.i == i && p.j == j) return p.label;
      }
      FAIL("pair not found");
      return 99;
    };
    CHECK(label_of(0, 2) == 1);  // S3.E1 -> S3.E3
    CHECK(label_of(2, 3) == 0);  // S3.E3, S3.E4
    CHECK(label_of(3, 4) == 1);  // S3.E4 -> S3.E5
  }

  TEST_CASE("backward truth edges are labelled -1") {
    GroundTruthEntry t;
    t.article_id = "1409.0466";
    t.equation_ids = {"S1.E1", "S1.E2"};
    t.adjacency = {{"S1.E1", {}}, {"S1.E2", {"S1.E1"}}};
    t.equation_numbers = {{"S1.E1", "1"}, {"S1.E2", "2"}};
    t.most_important = "S1.E1";
    const auto pairs = build_pairs(article_with(t.equation_ids), t);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].label == -1);
  }

  TEST_CASE("mismatched IDs are an error") {
    const auto rec = testing::dataset_record();
    CHECK_THROWS_AS(build_pairs(article_with({"S3.E1", "S3.E2"}), rec), Error);
  }

  TEST_CASE("pair feature joins alttexts and the text between") {
    const auto a = article_with({"S1.E1", "S1.E2", "S1.E3"});
    const auto f = pair_feature(a, 0, 2);
    CHECK(f.rfind("v_0 ", 0) == 0);
    CHECK(f.find("Words 1 here") != std::string::npos);
    CHECK(f.find("Words 2 here") != std::string::npos);
    CHECK(f.find("[[") == std::string::npos);
    CHECK(f.substr(f.size() - 4) == " v_2");
  }

  TEST_CASE("vectorize") {
    const std::vector<std::string> t1{"a b a"};
    auto v = vectorize(t1);
    CHECK(v.vocabulary == std::vector<std::string>{"a", "b"});
    CHECK(v.rows[0] == SparseRow{{0, 2}, {1, 1}});

    const std::vector<std::string> t2{""};
    v = vectorize(t2);
    CHECK(v.vocabulary.empty());
    CHECK(v.rows.size() == 1);
    CHECK(v.rows[0].empty());

    const std::vector<std::string> t3{"x1 + x1"};
    v = vectorize(t3);
    CHECK(v.vocabulary == std::vector<std::string>{"x1"});
    CHECK(v.rows[0] == SparseRow{{0, 2}});

    CHECK(nb_tokens("Hello, World x_2") == std::vector<std::string>{"hello", "world", "x", "2"});
  }

  TEST_CASE("toy corpus posterior matches the hand computation") {
    // Class +1: "x x", "x y"; class 0: "z z". Laplace smoothing over {x, y, z}.
    const std::vector<PairSample> s{doc(1, "x x"), doc(1, "x y"), doc(0, "z z")};
    const auto m = train(s, 1.0);
    const auto post = m.posterior("x");
    // P(+1 | x) = (2/3 * 4/7) / (2/3 * 4/7 + 1/3 * 1/5) = 40/47.
    CHECK(post[m.class_slot(1)] == doctest::Approx(40.0 / 47.0).epsilon(1e-12));
    CHECK(post[m.class_slot(0)] == doctest::Approx(7.0 / 47.0).epsilon(1e-12));
    CHECK(post[m.class_slot(-1)] == 0.0);
    CHECK(m.predict("x") == 1);
    CHECK(m.predict("z") == 0);
  }

  TEST_CASE("single-class training predicts that class") {
    const std::vector<PairSample> s{doc(-1, "a b"), doc(-1, "c")};
    const auto m = train(s);
    for (const char* q : {"a", "zzz", "", "a b c d"}) CHECK(m.predict(q) == -1);
  }

  TEST_CASE("doubling the training set keeps predictions") {
    const std::vector<PairSample> s{doc(1, "alpha beta"), doc(0, "gamma"), doc(-1, "beta delta"),
                                    doc(0, "gamma alpha"), doc(1, "alpha")};
    std::vector<PairSample> twice = s;
    twice.insert(twice.end(), s.begin(), s.end());
    const auto a = train(s);
    const auto b = train(twice);
    for (const char* q : {"alpha", "beta", "gamma", "delta", "alpha delta", "gamma beta", "omega"}) {
      CHECK(a.predict(q) == b.predict(q));
    }
  }

  TEST_CASE("unseen tokens are ignored and ties prefer 0") {
    const std::vector<PairSample> s{doc(1, "a"), doc(0, "b")};
    const auto m = train(s);
    const auto p = m.posterior("never seen");
    CHECK(p[m.class_slot(1)] == doctest::Approx(0.5));
    CHECK(m.predict("never seen") == 0);
  }

  TEST_CASE("likelihoods are normalized and priors sum to one") {
    const std::vector<PairSample> s{doc(1, "a b"), doc(0, "b c c"), doc(-1, "d")};
    const auto m = train(s, 0.5);
    double prior = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
      prior += std::exp(m.log_prior[c]);
      double total = 0.0;
      for (double l : m.log_likelihood[c]) total += std::exp(l);
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(prior == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("training errors") {
    CHECK_THROWS_AS(train(std::vector<PairSample>{}), Error);
    const std::vector<PairSample> s{doc(1, "a")};
    CHECK_THROWS_AS(train(s, 0.0), Error);
    CHECK_THROWS_AS(train(std::vector<PairSample>{doc(2, "a")}), Error);
  }

  TEST_CASE("model JSON round trip") {
    const std::vector<PairSample> s{doc(1, "a b"), doc(0, "b c")};
    const auto m = train(s);
    const auto back = NBModel::from_json(m.to_json());
    CHECK(back.vocabulary == m.vocabulary);
    CHECK(back.class_counts == m.class_counts);
    CHECK(std::isinf(back.log_prior[back.class_slot(-1)]));
    for (const char* q : {"a", "b", "c", "a c"}) {
      const auto p1 = m.posterior(q);
      const auto p2 = back.posterior(q);
      for (std::size_t c = 0; c < 3; ++c) CHECK(p1[c] == doctest::Approx(p2[c]).epsilon(1e-15));
    }
    CHECK_THROWS(NBModel::from_json("{}"));
  }

  TEST_CASE("graph from labels") {
    const auto a = article_with({"S1.E1", "S1.E2", "S1.E3"});
    const std::vector<int> zeros{0, 0, 0};
    CHECK(graph_from_labels(a, zeros).graph.edge_count() == 0);
    // (1,2) +1, (1,3) -1, (2,3) +1: the last edge would close 1 -> 2 -> 3 -> 1.
    const std::vector<int> cyc{1, -1, 1};
    const auto r = graph_from_labels(a, cyc);
    CHECK(r.graph.edge_names() ==
          std::vector<std::pair<std::string, std::string>>{{"S1.E1", "S1.E2"}, {"S1.E3", "S1.E1"}});
    CHECK(r.graph.is_acyclic());
    CHECK(r.notices.size() == 1);
    const std::vector<int> shortv{1, 1};
    CHECK_THROWS(graph_from_labels(a, shortv));
  }

  TEST_CASE("nb_extract with an all-zero model is empty") {
    const std::vector<PairSample> s{doc(0, "anything")};
    const auto m = train(s);
    CHECK(nb_extract(article_with({"S1.E1", "S1.E2", "S1.E3"}), m).graph.edge_count() == 0);
  }

  TEST_CASE("article split") {
    std::vector<std::string> ids;
    for (int i = 0; i < 20; ++i) ids.push_back(fmt::format("a{}", i));
    const auto s = split_by_article(ids, 0.9, 42);
    CHECK(s.train.size() == 18);
    CHECK(s.test.size() == 2);
    std::set<std::string> all(s.train.begin(), s.train.end());
    all.insert(s.test.begin(), s.test.end());
    CHECK(all.size() == 20);
    const auto again = split_by_article(ids, 0.9, 42);
    CHECK(again.train == s.train);
    CHECK(split_by_article(ids, 0.9, 43).train != s.train);
    const std::vector<std::string> one{"x"};
    CHECK(split_by_article(one, 0.5, 1).train.size() == 1);
    CHECK_THROWS_AS(split_by_article(ids, 1.5, 1), UsageError);
  }
}
