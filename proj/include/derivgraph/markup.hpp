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

// A small tag-soup parser for the HTML that LaTeXML-style converters emit,
// and a strict mode for standalone MathML fragments.

#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace derivgraph::markup {

struct Node {
  enum class Kind { document, element, text };

  Kind kind = Kind::element;
  std::string name;  // lower-cased element name; empty for text
  std::vector<std::pair<std::string, std::string>> attributes;
  std::string text;  // decoded character data for text nodes
  std::vector<Node> children;

  bool is_element() const { return kind == Kind::element; }
  bool is_text() const { return kind == Kind::text; }
  bool is(std::string_view element) const {
    return kind == Kind::element && name == element;
  }

  /// Attribute value, or nullptr if absent.
  const std::string* attr(std::string_view key) const;
  /// True if the class attribute contains `cls` as a whole word.
  bool has_class(std::string_view cls) const;
};

/// Lenient parse: unknown or mismatched end tags are ignored, unclosed
/// elements are closed at end of input. Throws ParseError only on input
/// that is not valid UTF-8.
Node parse_html(std::string_view input);

/// Strict parse of an XML-ish fragment (e.g. a MathML <math> element).
/// Mismatched or unterminated tags throw ParseError.
Node parse_fragment(std::string_view input);

/// Re-emit a node (and its subtree) as markup.
std::string serialize(const Node& node);

/// Concatenated character data of the subtree.
std::string text_content(const Node& node);

/// Replace character references (&amp;, &#955;, &#x3bb;, ...) with UTF-8.
std::string decode_entities(std::string_view raw);

/// Offset of the first invalid UTF-8 byte, or npos if valid.
std::size_t find_invalid_utf8(std::string_view input);

}  // namespace derivgraph::markup
