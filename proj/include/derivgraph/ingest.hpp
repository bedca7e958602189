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
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace derivgraph {

/// Half-open byte range into a ParsedArticle's linearized text.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  bool empty() const { return end <= begin; }
  std::size_t size() const { return empty() ? 0 : end - begin; }
  bool operator==(const Span&) const = default;
};

/// A numbered display equation.
struct KeyEquation {
  std::string eq_id;         // anchor ID, e.g. "S3.E5"
  std::string number_label;  // display number without parentheses, e.g. "5"
  std::string alttext;
  std::string mathml;
  std::size_t position = 0;  // offset of the placeholder in the article text
  std::size_t length = 0;    // placeholder length
  std::size_t ordinal = 0;

  std::size_t end() const { return position + length; }
};

struct TextSegment {
  Span paragraph_before;
  Span sentence_after;
  Span containing_sentence;
};

struct ParsedArticle {
  std::string article_id;
  std::vector<KeyEquation> equations;
  // Markup-free text. Paragraphs are separated by "\n\n"; each key
  // equation appears as a placeholder "[[<eq_id>]]".
  std::string text;
  std::map<std::string, TextSegment> segments;

  std::string_view slice(Span s) const;
  const KeyEquation* find(std::string_view eq_id) const;
  std::vector<std::string> equation_ids() const;
  std::vector<std::string> number_labels() const;
};

/// Placeholder emitted into ParsedArticle::text for an equation.
std::string equation_placeholder(std::string_view eq_id);

/// True for LaTeXML-style equation anchors such as "S3.E5" or "A1.E2";
/// `unnumbered` is set for the "Ex" form.
bool is_equation_anchor(std::string_view id, bool* unnumbered = nullptr);

/// Parse article HTML. Throws ParseError on unreadable input.
ParsedArticle parse_article(std::string_view html, std::string article_id);

/// Paragraph-before / sentence-after / containing-sentence windows for
/// every equation in the article.
std::map<std::string, TextSegment> segment_text(const ParsedArticle& article);

/// Keep only the listed equations (in article order), renumbering ordinals
/// and recomputing segments. IDs not present in the article are reported
/// through `missing`.
ParsedArticle restrict_to(const ParsedArticle& article,
                          std::span<const std::string> eq_ids,
                          std::vector<std::string>* missing = nullptr);

/// Sentence spans that partition `text`. Terminators are . ! ? followed by
/// whitespace and an upper-case letter or digit (or end of text); common
/// abbreviations such as "Eq." never terminate.
std::vector<Span> split_sentences(std::string_view text);

struct EquationReference {
  std::size_t offset = 0;  // relative to the searched span
  std::string number;
  bool operator==(const EquationReference&) const = default;
};

/// Citations of known equation numbers: "(N)", "Eq. (N)", "Eqs. (N)",
/// "Equation (N)", "equation N", "Eq. N".
std::vector<EquationReference> find_equation_references(
    std::string_view span, const std::set<std::string>& known_numbers);

}  // namespace derivgraph
