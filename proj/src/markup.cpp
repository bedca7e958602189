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

#include "derivgraph/markup.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdint>

#include <fmt/format.h>

#include "derivgraph/error.hpp"

namespace derivgraph::markup {

namespace {

constexpr std::array<std::string_view, 14> kVoidElements = {
    "area", "base", "br",   "col",   "embed",  "hr",    "img",
    "input", "link", "meta", "param", "source", "track", "wbr"};

constexpr std::array<std::string_view, 10> kClosesParagraph = {
    "p",  "div", "table", "ul", "ol", "section", "pre", "blockquote",
    "h1", "h2"};

struct NamedEntity {
  std::string_view name;
  char32_t code;
};

// Enough for LaTeXML output; anything else is passed through verbatim.
constexpr NamedEntity kEntities[] = {
    {"amp", U'&'},          {"lt", U'<'},          {"gt", U'>'},
    {"quot", U'"'},         {"apos", U'\''},       {"nbsp", 0xA0},
    {"ApplyFunction", 0x2061}, {"af", 0x2061},     {"InvisibleTimes", 0x2062},
    {"it", 0x2062},         {"InvisibleComma", 0x2063}, {"ic", 0x2063},
    {"minus", 0x2212},      {"times", 0xD7},       {"plusmn", 0xB1},
    {"le", 0x2264},         {"ge", 0x2265},        {"ne", 0x2260},
    {"infin", 0x221E},      {"sum", 0x2211},       {"int", 0x222B},
    {"prime", 0x2032},      {"hellip", 0x2026},    {"ndash", 0x2013},
    {"mdash", 0x2014},      {"alpha", 0x3B1},      {"beta", 0x3B2},
    {"gamma", 0x3B3},       {"delta", 0x3B4},      {"epsilon", 0x3B5},
    {"lambda", 0x3BB},      {"mu", 0x3BC},         {"pi", 0x3C0},
    {"sigma", 0x3C3},       {"omega", 0x3C9},      {"partial", 0x2202},
    {"nabla", 0x2207},      {"rarr", 0x2192},      {"middot", 0xB7},
};

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f';
}

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ||
         c == ':' || c == '.';
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

bool starts_with_icase(std::string_view s, std::size_t pos,
                       std::string_view prefix) {
  if (pos + prefix.size() > s.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[pos + i])) !=
        std::tolower(static_cast<unsigned char>(prefix[i])))
      return false;
  }
  return true;
}

class Parser {
 public:
  Parser(std::string_view input, bool strict) : in_(input), strict_(strict) {
    root_.kind = Node::Kind::document;
    stack_.push_back(&root_);
  }

  Node run() {
    while (pos_ < in_.size()) {
      if (in_[pos_] == '<') {
        parse_markup();
      } else {
        parse_text();
      }
    }
    if (strict_ && stack_.size() > 1) {
      throw ParseError(
          fmt::format("unclosed element <{}>", stack_.back()->name), pos_);
    }
    return std::move(root_);
  }

 private:
  Node& top() { return *stack_.back(); }

  void add_text(std::string text) {
    if (text.empty()) return;
    auto& kids = top().children;
    if (!kids.empty() && kids.back().is_text()) {
      kids.back().text += text;
      return;
    }
    Node t;
    t.kind = Node::Kind::text;
    t.text = std::move(text);
    kids.push_back(std::move(t));
  }

  void parse_text() {
    auto end = in_.find('<', pos_);
    if (end == std::string_view::npos) end = in_.size();
    add_text(decode_entities(in_.substr(pos_, end - pos_)));
    pos_ = end;
  }

  void parse_markup() {
    const std::size_t start = pos_;
    if (in_.compare(pos_, 4, "<!--") == 0) {
      auto end = in_.find("-->", pos_ + 4);
      if (end == std::string_view::npos) {
        if (strict_) throw ParseError("unterminated comment", start);
        pos_ = in_.size();
      } else {
        pos_ = end + 3;
      }
      return;
    }
    if (in_.compare(pos_, 9, "<![CDATA[") == 0) {
      auto end = in_.find("]]>", pos_ + 9);
      if (end == std::string_view::npos) {
        if (strict_) throw ParseError("unterminated CDATA section", start);
        end = in_.size();
      }
      add_text(std::string(in_.substr(pos_ + 9, end - pos_ - 9)));
      pos_ = std::min(in_.size(), end + 3);
      return;
    }
    if (in_.compare(pos_, 2, "<!") == 0 || in_.compare(pos_, 2, "<?") == 0) {
      auto end = in_.find('>', pos_ + 2);
      pos_ = end == std::string_view::npos ? in_.size() : end + 1;
      return;
    }
    if (in_.compare(pos_, 2, "</") == 0) {
      parse_end_tag();
      return;
    }
    if (pos_ + 1 < in_.size() &&
        std::isalpha(static_cast<unsigned char>(in_[pos_ + 1]))) {
      parse_start_tag();
      return;
    }
    if (strict_) throw ParseError("stray '<'", start);
    add_text("<");
    ++pos_;
  }

  std::string read_name() {
    std::size_t b = pos_;
    while (pos_ < in_.size() && is_name_char(in_[pos_])) ++pos_;
    return lower(in_.substr(b, pos_ - b));
  }

  void skip_space() {
    while (pos_ < in_.size() && is_space(in_[pos_])) ++pos_;
  }

  void parse_end_tag() {
    const std::size_t start = pos_;
    pos_ += 2;
    std::string name = read_name();
    auto close = in_.find('>', pos_);
    if (close == std::string_view::npos) {
      if (strict_) throw ParseError("unterminated end tag", start);
      pos_ = in_.size();
    } else {
      pos_ = close + 1;
    }
    for (std::size_t i = stack_.size(); i-- > 1;) {
      if (stack_[i]->name == name) {
        if (strict_ && i != stack_.size() - 1) {
          throw ParseError(fmt::format("mismatched </{}>, expected </{}>",
                                       name, stack_.back()->name),
                           start);
        }
        stack_.resize(i);
        return;
      }
    }
    if (strict_) throw ParseError(fmt::format("unexpected </{}>", name), start);
  }

  void close_implied(const std::string& name) {
    if (strict_) return;
    auto close_up_to = [&](auto&& closable, auto&& barrier) {
      for (std::size_t i = stack_.size(); i-- > 1;) {
        const auto& n = stack_[i]->name;
        if (barrier(n)) return;
        if (closable(n)) {
          stack_.resize(i);
          return;
        }
      }
    };
    if (std::find(kClosesParagraph.begin(), kClosesParagraph.end(), name) !=
        kClosesParagraph.end()) {
      if (top().name == "p") stack_.pop_back();
    } else if (name == "li") {
      close_up_to([](const std::string& n) { return n == "li"; },
                  [](const std::string& n) { return n == "ul" || n == "ol"; });
    } else if (name == "tr") {
      close_up_to([](const std::string& n) { return n == "tr"; },
                  [](const std::string& n) {
                    return n == "table" || n == "tbody" || n == "thead";
                  });
    } else if (name == "td" || name == "th") {
      close_up_to(
          [](const std::string& n) { return n == "td" || n == "th"; },
          [](const std::string& n) { return n == "tr" || n == "table"; });
    }
  }

  void parse_start_tag() {
    const std::size_t start = pos_;
    ++pos_;
    Node el;
    el.kind = Node::Kind::element;
    el.name = read_name();
    bool self_closing = false;
    bool terminated = false;
    while (pos_ < in_.size()) {
      skip_space();
      if (pos_ >= in_.size()) break;
      char c = in_[pos_];
      if (c == '>') {
        ++pos_;
        terminated = true;
        break;
      }
      if (c == '/') {
        ++pos_;
        if (pos_ < in_.size() && in_[pos_] == '>') {
          ++pos_;
          self_closing = true;
          terminated = true;
          break;
        }
        continue;
      }
      std::size_t name_begin = pos_;
      while (pos_ < in_.size() && !is_space(in_[pos_]) && in_[pos_] != '=' &&
             in_[pos_] != '>' && in_[pos_] != '/')
        ++pos_;
      std::string key = lower(in_.substr(name_begin, pos_ - name_begin));
      if (key.empty()) {
        ++pos_;  // garbage byte such as a stray quote
        continue;
      }
      skip_space();
      std::string value;
      if (pos_ < in_.size() && in_[pos_] == '=') {
        ++pos_;
        skip_space();
        if (pos_ < in_.size() && (in_[pos_] == '"' || in_[pos_] == '\'')) {
          char q = in_[pos_++];
          auto end = in_.find(q, pos_);
          if (end == std::string_view::npos) {
            if (strict_) throw ParseError("unterminated attribute value", start);
            end = in_.size();
          }
          value = decode_entities(in_.substr(pos_, end - pos_));
          pos_ = std::min(in_.size(), end + 1);
        } else {
          std::size_t vb = pos_;
          while (pos_ < in_.size() && !is_space(in_[pos_]) && in_[pos_] != '>')
            ++pos_;
          value = decode_entities(in_.substr(vb, pos_ - vb));
        }
      }
      el.attributes.emplace_back(std::move(key), std::move(value));
    }
    if (!terminated && strict_) throw ParseError("unterminated start tag", start);

    close_implied(el.name);
    const bool is_void =
        !strict_ && std::find(kVoidElements.begin(), kVoidElements.end(),
                              el.name) != kVoidElements.end();
    const std::string name = el.name;
    top().children.push_back(std::move(el));
    if (self_closing || is_void || !terminated) return;

    if (!strict_ && (name == "script" || name == "style")) {
      std::size_t end = pos_;
      while (end < in_.size() && !starts_with_icase(in_, end, "</" + name))
        ++end;
      Node& raw = top().children.back();
      if (end > pos_) {
        Node t;
        t.kind = Node::Kind::text;
        t.text = std::string(in_.substr(pos_, end - pos_));
        raw.children.push_back(std::move(t));
      }
      auto close = in_.find('>', end);
      pos_ = close == std::string_view::npos ? in_.size() : close + 1;
      return;
    }
    stack_.push_back(&top().children.back());
  }

  std::string_view in_;
  bool strict_;
  std::size_t pos_ = 0;
  Node root_;
  std::vector<Node*> stack_;
};

void escape_into(std::string& out, std::string_view s, bool attribute) {
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"':
        if (attribute) {
          out += "&quot;";
          break;
        }
        [[fallthrough]];
      default: out.push_back(c);
    }
  }
}

void serialize_into(std::string& out, const Node& node) {
  switch (node.kind) {
    case Node::Kind::text:
      escape_into(out, node.text, false);
      return;
    case Node::Kind::document:
      for (const auto& c : node.children) serialize_into(out, c);
      return;
    case Node::Kind::element:
      break;
  }
  out += '<';
  out += node.name;
  for (const auto& [k, v] : node.attributes) {
    out += ' ';
    out += k;
    out += "=\"";
    escape_into(out, v, true);
    out += '"';
  }
  if (node.children.empty()) {
    out += "/>";
    return;
  }
  out += '>';
  for (const auto& c : node.children) serialize_into(out, c);
  out += "</";
  out += node.name;
  out += '>';
}

void text_into(std::string& out, const Node& node) {
  if (node.is_text()) {
    out += node.text;
    return;
  }
  for (const auto& c : node.children) text_into(out, c);
}

}  // namespace

const std::string* Node::attr(std::string_view key) const {
  for (const auto& [k, v] : attributes) {
    if (k == key) return &v;
  }
  return nullptr;
}

bool Node::has_class(std::string_view cls) const {
  const std::string* classes = attr("class");
  if (!classes) return false;
  std::string_view s = *classes;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t b = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    if (s.substr(b, i - b) == cls) return true;
  }
  return false;
}

std::string decode_entities(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  std::size_t i = 0;
  while (i < raw.size()) {
    if (raw[i] != '&') {
      out.push_back(raw[i++]);
      continue;
    }
    auto semi = raw.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 32) {
      out.push_back(raw[i++]);
      continue;
    }
    std::string_view ref = raw.substr(i + 1, semi - i - 1);
    bool done = false;
    if (ref.size() > 1 && ref[0] == '#') {
      std::uint32_t cp = 0;
      const bool hex = ref[1] == 'x' || ref[1] == 'X';
      std::string_view digits = ref.substr(hex ? 2 : 1);
      auto [ptr, ec] = std::from_chars(digits.data(),
                                       digits.data() + digits.size(), cp,
                                       hex ? 16 : 10);
      if (ec == std::errc{} && ptr == digits.data() + digits.size() &&
          !digits.empty() && cp <= 0x10FFFF) {
        append_utf8(out, cp);
        done = true;
      }
    } else {
      for (const auto& e : kEntities) {
        if (e.name == ref) {
          append_utf8(out, e.code);
          done = true;
          break;
        }
      }
    }
    if (done) {
      i = semi + 1;
    } else {
      out.push_back(raw[i++]);
    }
  }
  return out;
}

std::size_t find_invalid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0 && c >= 0xC2) {
      len = 2;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
    } else if ((c & 0xF8) == 0xF0 && c <= 0xF4) {
      len = 4;
    } else {
      return i;
    }
    if (i + len > s.size()) return i;
    for (std::size_t k = 1; k < len; ++k) {
      if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) return i;
    }
    i += len;
  }
  return std::string_view::npos;
}

Node parse_html(std::string_view input) {
  if (auto bad = find_invalid_utf8(input); bad != std::string_view::npos) {
    throw ParseError(fmt::format("invalid UTF-8 at byte {}", bad), bad);
  }
  return Parser(input, false).run();
}

Node parse_fragment(std::string_view input) {
  if (auto bad = find_invalid_utf8(input); bad != std::string_view::npos) {
    throw ParseError(fmt::format("invalid UTF-8 at byte {}", bad), bad);
  }
  return Parser(input, true).run();
}

std::string serialize(const Node& node) {
  std::string out;
  serialize_into(out, node);
  return out;
}

std::string text_content(const Node& node) {
  std::string out;
  text_into(out, node);
  return out;
}

}  // namespace derivgraph::markup
