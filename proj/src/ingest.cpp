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

#include "derivgraph/ingest.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>
#include <unordered_map>

#include <fmt/format.h>

#include "derivgraph/markup.hpp"

namespace derivgraph {

namespace {

using markup::Node;

constexpr std::array<std::string_view, 30> kBlockElements = {
    "p",       "div",    "section", "article",    "table",  "tr",
    "li",      "ul",     "ol",      "h1",         "h2",     "h3",
    "h4",      "h5",     "h6",      "blockquote", "figure", "figcaption",
    "header",  "footer", "main",    "pre",        "dl",     "dt",
    "dd",      "caption", "body",   "html",       "aside",  "hr"};

constexpr std::array<std::string_view, 6> kSkippedElements = {
    "head", "script", "style", "noscript", "template", "annotation-xml"};

bool in_list(std::string_view name, const auto& list) {
  return std::find(list.begin(), list.end(), name) != list.end();
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f';
}

std::string_view trim_view(std::string_view s) {
  // Also strips U+00A0 (C2 A0), which LaTeXML uses around equation tags.
  for (;;) {
    if (!s.empty() && is_space(s.front())) {
      s.remove_prefix(1);
    } else if (s.size() >= 2 && s[0] == '\xC2' && s[1] == '\xA0') {
      s.remove_prefix(2);
    } else {
      break;
    }
  }
  for (;;) {
    if (!s.empty() && is_space(s.back())) {
      s.remove_suffix(1);
    } else if (s.size() >= 2 && s[s.size() - 2] == '\xC2' && s.back() == '\xA0') {
      s.remove_suffix(2);
    } else {
      break;
    }
  }
  return s;
}

Span trim_span(std::string_view text, Span s) {
  while (s.begin < s.end && is_space(text[s.begin])) ++s.begin;
  while (s.end > s.begin && is_space(text[s.end - 1])) --s.end;
  if (s.end < s.begin) s.end = s.begin;
  return s;
}

bool contains_math(const Node& n) {
  if (n.is("math")) return true;
  for (const auto& c : n.children) {
    if (c.is_element() && contains_math(c)) return true;
  }
  return false;
}

void collect_math(const Node& n, std::vector<const Node*>& out) {
  if (n.is("math")) {
    out.push_back(&n);
    return;
  }
  for (const auto& c : n.children) collect_math(c, out);
}

// "(12a)" -> "12a"; anything else -> "".
std::string parenthesized_label(std::string_view raw) {
  std::string_view s = trim_view(raw);
  if (s.size() < 3 || s.front() != '(' || s.back() != ')') return {};
  s = trim_view(s.substr(1, s.size() - 2));
  if (s.empty() || s.find_first_of("()") != std::string_view::npos) return {};
  return std::string(s);
}

// Visible equation tag of a container, searched outside <math>.
std::string find_label(const Node& n) {
  if (n.is("math")) return {};
  if (n.is_text()) return parenthesized_label(n.text);
  if (n.has_class("ltx_tag_equation") || n.has_class("ltx_tag")) {
    std::string text = markup::text_content(n);
    if (auto label = parenthesized_label(text); !label.empty()) return label;
    auto t = trim_view(text);
    if (!t.empty()) return std::string(t);
  }
  for (const auto& c : n.children) {
    if (auto label = find_label(c); !label.empty()) return label;
  }
  return {};
}

struct Candidate {
  const Node* container = nullptr;
  std::string eq_id;
  std::string label;
  std::string alttext;
  std::string mathml;
};

void fill_content(Candidate& cand) {
  std::vector<const Node*> maths;
  collect_math(*cand.container, maths);
  std::string alt;
  for (const Node* m : maths) {
    if (const std::string* a = m->attr("alttext"); a && !trim_view(*a).empty()) {
      if (!alt.empty()) alt += ' ';
      alt += std::string(trim_view(*a));
    }
    cand.mathml += markup::serialize(*m);
  }
  cand.alttext = alt.empty() ? cand.mathml : alt;
}

class Detector {
 public:
  std::vector<Candidate> run(const Node& root) {
    std::vector<const Node*> ancestors;
    walk(root, ancestors);
    return std::move(found_);
  }

 private:
  void walk(const Node& n, std::vector<const Node*>& ancestors) {
    if (!n.is_element() && n.kind != Node::Kind::document) return;
    if (n.is_element() && in_list(n.name, kSkippedElements)) return;

    if (n.is_element() && !n.is("math")) {
      const std::string* id = n.attr("id");
      bool unnumbered = false;
      if (id && is_equation_anchor(*id, &unnumbered) && contains_math(n)) {
        std::string label = find_label(n);
        if (label.empty() && !unnumbered) {
          // Numbered anchor without a rendered tag: take the number from the ID.
          auto dot = id->rfind('.');
          label = id->substr(dot + 2);
        }
        if (!label.empty()) {
          add({&n, *id, std::move(label), {}, {}});
          return;
        }
      }
    }
    if (n.is("math")) {
      const std::string* display = n.attr("display");
      if (display && *display == "block") {
        // Non-LaTeXML layout: a numbered row holding a display formula.
        const Node* row = nullptr;
        for (auto it = ancestors.rbegin(); it != ancestors.rend(); ++it) {
          if ((*it)->is("tr")) {
            row = *it;
            break;
          }
        }
        if (row) {
          if (std::string label = find_label(*row); !label.empty()) {
            std::string id;
            if (const std::string* own = row->attr("id")) {
              id = *own;
            } else if (const std::string* mid = n.attr("id")) {
              id = *mid;
            } else {
              id = fmt::format("eq.{}", found_.size() + 1);
            }
            add({row, std::move(id), std::move(label), {}, {}});
          }
        }
      }
      return;
    }
    ancestors.push_back(&n);
    for (const auto& c : n.children) walk(c, ancestors);
    ancestors.pop_back();
  }

  void add(Candidate cand) {
    if (!ids_.insert(cand.eq_id).second) return;
    for (const auto& f : found_) {
      if (f.container == cand.container) return;
    }
    fill_content(cand);
    found_.push_back(std::move(cand));
  }

  std::vector<Candidate> found_;
  std::set<std::string> ids_;
};

class Linearizer {
 public:
  explicit Linearizer(const std::unordered_map<const Node*, std::size_t>& keys)
      : keys_(keys) {}

  void walk(const Node& n) {
    switch (n.kind) {
      case Node::Kind::text:
        add_text(n.text);
        return;
      case Node::Kind::document:
        for (const auto& c : n.children) walk(c);
        return;
      case Node::Kind::element:
        break;
    }
    if (in_list(n.name, kSkippedElements)) return;
    if (auto it = keys_.find(&n); it != keys_.end()) {
      emit_placeholder(it->second);
      return;
    }
    if (n.is("math")) {
      const std::string* alt = n.attr("alttext");
      add_text(alt ? *alt : markup::text_content(n));
      pending_space_ = true;
      return;
    }
    if (n.is("br") || n.is("td") || n.is("th")) pending_space_ = true;
    const bool block = in_list(n.name, kBlockElements);
    if (block) paragraph_break();
    for (const auto& c : n.children) walk(c);
    if (block) paragraph_break();
  }

  std::string finish() {
    while (!text_.empty() && is_space(text_.back())) text_.pop_back();
    return std::move(text_);
  }

  // (candidate index, position, length) in emission order.
  const std::vector<std::array<std::size_t, 3>>& placements() const {
    return placements_;
  }

  void set_ids(const std::vector<std::string>* ids) { ids_ = ids; }

 private:
  bool at_paragraph_start() const {
    return text_.empty() || (text_.size() >= 2 && text_.ends_with("\n\n"));
  }

  void paragraph_break() {
    while (!text_.empty() && text_.back() == ' ') text_.pop_back();
    if (!text_.empty() && !text_.ends_with("\n\n")) text_ += "\n\n";
    pending_space_ = false;
  }

  void put_char(char c) {
    if (pending_space_ && !at_paragraph_start()) text_ += ' ';
    pending_space_ = false;
    text_ += c;
  }

  void add_text(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size()) {
      if (is_space(s[i])) {
        int newlines = 0;
        while (i < s.size() && is_space(s[i])) {
          if (s[i] == '\n') ++newlines;
          ++i;
        }
        if (newlines >= 2) {
          paragraph_break();
        } else {
          pending_space_ = true;
        }
        continue;
      }
      put_char(s[i++]);
    }
  }

  void emit_placeholder(std::size_t index) {
    pending_space_ = true;
    if (pending_space_ && !at_paragraph_start()) text_ += ' ';
    pending_space_ = false;
    std::string ph = equation_placeholder((*ids_)[index]);
    placements_.push_back({index, text_.size(), ph.size()});
    text_ += ph;
    pending_space_ = true;
  }

  const std::unordered_map<const Node*, std::size_t>& keys_;
  const std::vector<std::string>* ids_ = nullptr;
  std::string text_;
  bool pending_space_ = false;
  std::vector<std::array<std::size_t, 3>> placements_;
};

std::vector<Span> paragraphs_of(std::string_view text) {
  std::vector<Span> out;
  std::size_t b = 0;
  while (b <= text.size()) {
    std::size_t e = text.find("\n\n", b);
    if (e == std::string_view::npos) e = text.size();
    out.push_back({b, e});
    if (e == text.size()) break;
    b = e + 2;
  }
  return out;
}

const Span* paragraph_containing(const std::vector<Span>& paras, std::size_t pos) {
  for (const auto& p : paras) {
    if (pos >= p.begin && pos <= p.end) return &p;
  }
  return paras.empty() ? nullptr : &paras.back();
}

}  // namespace

std::string equation_placeholder(std::string_view eq_id) {
  return fmt::format("[[{}]]", eq_id);
}

bool is_equation_anchor(std::string_view id, bool* unnumbered) {
  auto dot = id.rfind('.');
  if (dot == std::string_view::npos || dot == 0) return false;
  std::string_view last = id.substr(dot + 1);
  bool ex = false;
  if (last.size() >= 2 && last[0] == 'E') {
    last.remove_prefix(1);
    if (!last.empty() && last[0] == 'x') {
      ex = true;
      last.remove_prefix(1);
    }
  } else {
    return false;
  }
  if (last.empty() ||
      !std::all_of(last.begin(), last.end(),
                   [](unsigned char c) { return std::isdigit(c); }))
    return false;
  // Every preceding component looks like "S3", "SS1", "A1", "Sx2".
  std::string_view head = id.substr(0, dot);
  std::size_t b = 0;
  while (b <= head.size()) {
    std::size_t e = head.find('.', b);
    if (e == std::string_view::npos) e = head.size();
    std::string_view comp = head.substr(b, e - b);
    std::size_t k = 0;
    while (k < comp.size() && std::isalpha(static_cast<unsigned char>(comp[k]))) ++k;
    if (k == 0 || k == comp.size()) return false;
    if (!std::all_of(comp.begin() + static_cast<std::ptrdiff_t>(k), comp.end(),
                     [](unsigned char c) { return std::isdigit(c); }))
      return false;
    if (e == head.size()) break;
    b = e + 1;
  }
  if (unnumbered) *unnumbered = ex;
  return true;
}

std::string_view ParsedArticle::slice(Span s) const {
  if (s.empty() || s.begin >= text.size()) return {};
  return std::string_view(text).substr(s.begin, std::min(s.end, text.size()) - s.begin);
}

const KeyEquation* ParsedArticle::find(std::string_view eq_id) const {
  for (const auto& e : equations) {
    if (e.eq_id == eq_id) return &e;
  }
  return nullptr;
}

std::vector<std::string> ParsedArticle::equation_ids() const {
  std::vector<std::string> out;
  for (const auto& e : equations) out.push_back(e.eq_id);
  return out;
}

std::vector<std::string> ParsedArticle::number_labels() const {
  std::vector<std::string> out;
  for (const auto& e : equations) out.push_back(e.number_label);
  return out;
}

ParsedArticle parse_article(std::string_view html, std::string article_id) {
  Node doc = markup::parse_html(html);
  std::vector<Candidate> cands = Detector().run(doc);

  std::unordered_map<const Node*, std::size_t> keys;
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    keys.emplace(cands[i].container, i);
    ids.push_back(cands[i].eq_id);
  }
  Linearizer lin(keys);
  lin.set_ids(&ids);
  lin.walk(doc);

  ParsedArticle article;
  article.article_id = std::move(article_id);
  for (const auto& [index, pos, len] : lin.placements()) {
    Candidate& c = cands[index];
    KeyEquation eq;
    eq.eq_id = c.eq_id;
    eq.number_label = c.label;
    eq.alttext = c.alttext;
    eq.mathml = c.mathml;
    eq.position = pos;
    eq.length = len;
    eq.ordinal = article.equations.size();
    article.equations.push_back(std::move(eq));
  }
  article.text = lin.finish();
  article.segments = segment_text(article);
  return article;
}

std::map<std::string, TextSegment> segment_text(const ParsedArticle& article) {
  const std::string_view text = article.text;
  const auto paras = paragraphs_of(text);
  const auto& eqs = article.equations;
  std::vector<TextSegment> segs(eqs.size());

  for (std::size_t i = 0; i < eqs.size(); ++i) {
    const std::size_t pos = eqs[i].position;
    const std::size_t prev_end = i > 0 ? eqs[i - 1].end() : 0;
    const Span* para = paragraph_containing(paras, pos);
    Span before;
    if (para) {
      before = trim_span(text, {std::max(para->begin, prev_end), pos});
      if (before.empty()) {
        // Nearest earlier paragraph with content.
        for (auto it = paras.rbegin(); it != paras.rend(); ++it) {
          if (it->end > para->begin || &*it == para) continue;
          Span cand = trim_span(text, *it);
          if (cand.empty()) continue;
          before = prev_end >= cand.end
                       ? Span{pos, pos}
                       : trim_span(text, {std::max(cand.begin, prev_end), cand.end});
          break;
        }
      }
    }
    if (before.empty()) before = {pos, pos};
    segs[i].paragraph_before = before;

    if (!before.empty()) {
      auto sentences = split_sentences(text.substr(before.begin, before.size()));
      Span last = sentences.back();
      segs[i].containing_sentence =
          trim_span(text, {before.begin + last.begin, before.begin + last.end});
    } else {
      segs[i].containing_sentence = {pos, pos};
    }
  }

  for (std::size_t i = 0; i < eqs.size(); ++i) {
    const std::size_t start = eqs[i].end();
    Span after{start, start};
    std::size_t s = start;
    while (s < text.size() && is_space(text[s])) ++s;
    const bool next_exists = i + 1 < eqs.size();
    const std::size_t next_pos = next_exists ? eqs[i + 1].position : text.size();
    if (s < text.size() && s < next_pos) {
      const Span* para = paragraph_containing(paras, s);
      std::size_t limit = std::min(para ? para->end : text.size(), next_pos);
      auto sentences = split_sentences(text.substr(s, limit - s));
      if (!sentences.empty()) {
        after = trim_span(text, {s + sentences.front().begin, s + sentences.front().end});
      }
    }
    // A following sentence that already belongs to the next equation's
    // paragraph window is left to that equation.
    if (next_exists && !after.empty()) {
      const Span& nb = segs[i + 1].paragraph_before;
      if (!nb.empty() && after.begin < nb.end && nb.begin < after.end) {
        after = {start, start};
      }
    }
    if (after.empty()) after = {start, start};
    segs[i].sentence_after = after;
  }

  std::map<std::string, TextSegment> out;
  for (std::size_t i = 0; i < eqs.size(); ++i) out.emplace(eqs[i].eq_id, segs[i]);
  return out;
}

ParsedArticle restrict_to(const ParsedArticle& article,
                          std::span<const std::string> eq_ids,
                          std::vector<std::string>* missing) {
  std::set<std::string> wanted(eq_ids.begin(), eq_ids.end());
  ParsedArticle out;
  out.article_id = article.article_id;
  out.text = article.text;
  std::set<std::string> present;
  for (const auto& e : article.equations) {
    if (!wanted.count(e.eq_id)) continue;
    KeyEquation copy = e;
    copy.ordinal = out.equations.size();
    out.equations.push_back(std::move(copy));
    present.insert(e.eq_id);
  }
  if (missing) {
    missing->clear();
    for (const auto& id : eq_ids) {
      if (!present.count(id)) missing->push_back(id);
    }
  }
  out.segments = segment_text(out);
  return out;
}

}  // namespace derivgraph
