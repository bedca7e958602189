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

#include <regex>
#include <set>
#include <string>

#include "derivgraph/ingest.hpp"
#include "derivgraph/markup.hpp"
#include "support.hpp"

using namespace derivgraph;
using testing::equation_html;
using testing::page_html;
using testing::para_html;

namespace {

std::string_view before_of(const ParsedArticle& a, const std::string& id) {
  return a.slice(a.segments.at(id).paragraph_before);
}

std::string_view after_of(const ParsedArticle& a, const std::string& id) {
  return a.slice(a.segments.at(id).sentence_after);
}

std::string_view sentence_of(const ParsedArticle& a, const std::string& id) {
  return a.slice(a.segments.at(id).containing_sentence);
}

std::vector<std::string> sentences(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& s : split_sentences(text)) out.emplace_back(text.substr(s.begin, s.size()));
  return out;
}

}  // namespace

TEST_SUITE("ingest") {
  TEST_CASE("a labelled display equation becomes a key equation") {
    const auto html = page_html(para_html("Combining, we get") +
                                equation_html("S2.E8", "8", "a=b+c", "<mi>a</mi>"));
    const auto a = parse_article(html, "x");
    REQUIRE(a.equations.size() == 1);
    const auto& e = a.equations[0];
    CHECK(e.eq_id == "S2.E8");
    CHECK(e.number_label == "8");
    CHECK(e.alttext == "a=b+c");
    CHECK(e.mathml.find("<mi>a</mi>") != std::string::npos);
    CHECK(a.text.substr(e.position, e.length) == equation_placeholder("S2.E8"));
  }

  TEST_CASE("inline math is not a key equation") {
    const auto html = page_html(para_html(
        "Let <math alttext=\"x\" display=\"inline\"><mi>x</mi></math> and "
        "<math alttext=\"y^2\" display=\"inline\"><msup><mi>y</mi><mn>2</mn></msup></math> be given."));
    const auto a = parse_article(html, "x");
    CHECK(a.equations.empty());
    CHECK(a.text.find("Let x and y^2 be given.") != std::string::npos);
  }

  TEST_CASE("unlabelled display is excluded") {
    const std::string ex =
        "<table id=\"S1.Ex1\" class=\"ltx_equation ltx_eqn_table\"><tbody><tr><td>"
        "<math alttext=\"z=0\" display=\"block\"><mi>z</mi></math></td></tr></tbody></table>";
    const auto a = parse_article(page_html(para_html("First") + equation_html("S1.E1", "1", "a") +
                                           para_html("Then") + ex + para_html("Last") +
                                           equation_html("S1.E2", "2", "b")),
                                 "x");
    REQUIRE(a.equations.size() == 2);
    CHECK(a.equations[1].eq_id == "S1.E2");
  }

  TEST_CASE("anchor patterns") {
    bool unnumbered = false;
    CHECK(is_equation_anchor("S3.E5", &unnumbered));
    CHECK_FALSE(unnumbered);
    CHECK(is_equation_anchor("S1.Ex2", &unnumbered));
    CHECK(unnumbered);
    CHECK(is_equation_anchor("A1.E2"));
    CHECK(is_equation_anchor("S2.SS1.E3"));
    CHECK_FALSE(is_equation_anchor("S3.E5.m1"));
    CHECK_FALSE(is_equation_anchor("S3.p1"));
    CHECK_FALSE(is_equation_anchor("S1.EGx1"));
  }

  TEST_CASE("fixture articles: equation counts match an independent tag scan") {
    // Count numbered equation tables by regex over the raw HTML.
    const std::regex table_id(R"re(<table id="(S\d+\.E\d+)")re");
    for (const char* id : {"1701.00003", "2003.01456", "1812.07789"}) {
      const std::string html = testing::fixture_text(fmt::format("articles/{}.html", id));
      std::vector<std::string> scanned;
      for (std::sregex_iterator it(html.begin(), html.end(), table_id), end; it != end; ++it) {
        scanned.push_back((*it)[1]);
      }
      const auto a = parse_article(html, id);
      CHECK(a.equation_ids() == scanned);
      for (std::size_t i = 0; i < a.equations.size(); ++i) {
        CHECK(a.equations[i].ordinal == i);
        CHECK_FALSE(a.equations[i].alttext.empty());
        if (i) CHECK(a.equations[i - 1].position < a.equations[i].position);
      }
    }
  }

  TEST_CASE("equation group rows carry their own numbers") {
    const auto a = parse_article(testing::fixture_text("articles/2104.05123.html"), "2104.05123");
    REQUIRE(a.equations.size() == 12);
    CHECK(a.find("S1.E5") != nullptr);
    CHECK(a.find("S1.E6") != nullptr);
    CHECK(a.find("S1.Ex1") == nullptr);
    CHECK(a.find("S1.EGx1") == nullptr);
    CHECK(a.find("S1.E5")->number_label == "5");
    CHECK(a.find("S1.E5")->alttext.find(' ') != std::string::npos);  // cells joined
    CHECK(a.number_labels().back() == "12");
  }

  TEST_CASE("seven numbered equations get ordinals 0..6") {
    std::string body;
    for (int i = 1; i <= 7; ++i) {
      body += para_html(fmt::format("Step {} reads", i));
      body += equation_html(fmt::format("S1.E{}", i), std::to_string(i), fmt::format("x_{}=0", i));
    }
    const auto a = parse_article(page_html(body), "x");
    REQUIRE(a.equations.size() == 7);
    for (std::size_t i = 0; i < 7; ++i) CHECK(a.equations[i].ordinal == i);
  }

  TEST_CASE("invalid UTF-8 is unreadable input") {
    CHECK_THROWS_AS(parse_article("<p>\xff\xfe</p>", "x"), ParseError);
  }

  TEST_CASE("equation at the start has an empty paragraph_before") {
    const auto a = parse_article(page_html(equation_html("S1.E1", "1", "a") + para_html("After it.")), "x");
    REQUIRE(a.equations.size() == 1);
    CHECK(a.segments.at("S1.E1").paragraph_before.empty());
    CHECK(after_of(a, "S1.E1") == "After it.");
  }

  TEST_CASE("second of two adjacent equations stops at the first") {
    const auto html = page_html(
        "<div class=\"ltx_para\"><p class=\"ltx_p\">The pair reads</p>" +
        equation_html("S1.E1", "1", "a") + equation_html("S1.E2", "2", "b") + "</div>");
    const auto a = parse_article(html, "x");
    CHECK(before_of(a, "S1.E1") == "The pair reads");
    CHECK(a.segments.at("S1.E2").paragraph_before.empty());
    const auto& seg = a.segments.at("S1.E2");
    CHECK(seg.paragraph_before.begin >= a.equations[0].end());
  }

  TEST_CASE("text between two equations bounds the second window") {
    const auto html = page_html(para_html("Start here. We have") + equation_html("S1.E1", "1", "a") +
                                para_html("and moreover") + equation_html("S1.E2", "2", "b"));
    const auto a = parse_article(html, "x");
    CHECK(before_of(a, "S1.E1") == "Start here. We have");
    CHECK(sentence_of(a, "S1.E1") == "We have");
    CHECK(before_of(a, "S1.E2") == "and moreover");
    // The only following text is the lead-in of the next equation.
    CHECK(a.segments.at("S1.E1").sentence_after.empty());
  }

  TEST_CASE("sentence_after stays within its paragraph") {
    const auto html = page_html("<div class=\"ltx_para\"><p class=\"ltx_p\">Define</p>" +
                                equation_html("S1.E1", "1", "a") +
                                "<p class=\"ltx_p\">Here a is fixed. More text.</p></div>" +
                                para_html("Hence") + equation_html("S1.E2", "2", "b"));
    const auto a = parse_article(html, "x");
    CHECK(after_of(a, "S1.E1") == "Here a is fixed.");
    CHECK(before_of(a, "S1.E2") == "Hence");
  }

  TEST_CASE("segment spans lie inside the text and respect the equation") {
    for (const char* id : {"1701.00003", "2003.01456", "2104.05123", "1812.07789"}) {
      const auto a = parse_article(testing::fixture_text(fmt::format("articles/{}.html", id)), id);
      for (const auto& e : a.equations) {
        const auto& s = a.segments.at(e.eq_id);
        CHECK(s.paragraph_before.end <= e.position);
        CHECK(s.containing_sentence.end <= e.position);
        CHECK(s.sentence_after.begin >= e.end());
        CHECK(s.sentence_after.end <= a.text.size());
        CHECK(a.slice(s.paragraph_before).find("[[") == std::string_view::npos);
      }
    }
  }

  TEST_CASE("restrict_to renumbers and reports missing IDs") {
    const auto a = parse_article(testing::fixture_text("articles/1701.00003.html"), "1701.00003");
    std::vector<std::string> missing;
    const std::vector<std::string> keep{"S2.E2", "S2.E8", "S9.E1"};
    const auto r = restrict_to(a, keep, &missing);
    CHECK(r.equation_ids() == std::vector<std::string>{"S2.E2", "S2.E8"});
    CHECK(r.equations[1].ordinal == 1);
    CHECK(missing == std::vector<std::string>{"S9.E1"});
    CHECK(r.segments.size() == 2);
  }

  TEST_CASE("split_sentences") {
    CHECK(sentences("Using Eq. (4) we find the result.") ==
          std::vector<std::string>{"Using Eq. (4) we find the result."});
    CHECK(split_sentences("").empty());
    CHECK(sentences("A ends. B starts.") == std::vector<std::string>{"A ends. ", "B starts."});
    CHECK(sentences("See Fig. 2 and Ref. 3, i.e. this. Then 4 more.").size() == 2);
    CHECK(sentences("Is it? Yes! 3 remain.").size() == 3);
    CHECK(sentences("a.b stays together.").size() == 1);
    // Spans partition the input.
    const std::string t = "One. Two three. Four!  Five?";
    std::size_t at = 0;
    for (const auto& s : split_sentences(t)) {
      CHECK(s.begin == at);
      at = s.end;
    }
    CHECK(at == t.size());
  }

  TEST_CASE("find_equation_references") {
    const std::set<std::string> k48{"4", "8"};
    CHECK(find_equation_references("Substituting (4) into the above", k48) ==
          std::vector<EquationReference>{{13, "4"}});
    CHECK(find_equation_references("see Section (4)", {}).empty());
    const auto two = find_equation_references("combining Eqs. (3) and (5) yields", {"3", "5"});
    REQUIRE(two.size() == 2);
    CHECK(two[0].number == "3");
    CHECK(two[1].number == "5");
    const std::set<std::string> k{"1", "2", "12"};
    CHECK(find_equation_references("Equation (2) and equation 12, Eq. 1", k).size() == 3);
    CHECK(find_equation_references("EQUATION 2 holds", k).size() == 1);
    CHECK(find_equation_references("(13) and (21)", k).empty());
    CHECK(find_equation_references("x(1+y) and 12 apples", k).empty());
  }

  TEST_CASE("markup helpers") {
    CHECK(markup::decode_entities("a&amp;b&#955;&#x3bb;&lt;") == "a&bλλ<");
    const auto doc = markup::parse_html("<div class=\"x ltx_para\"><p>hi<br>there</div>");
    REQUIRE(doc.children.size() == 1);
    CHECK(doc.children[0].has_class("ltx_para"));
    CHECK_FALSE(doc.children[0].has_class("ltx"));
    CHECK(markup::text_content(doc) == "hithere");
    CHECK_THROWS_AS(markup::parse_fragment("<mrow><mi>x</mrow>"), ParseError);
    CHECK(markup::find_invalid_utf8("ok\xc3") == 2);
  }
}
