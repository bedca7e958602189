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

#include "derivgraph/analytic.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <vector>

#include <fmt/format.h>

#include "derivgraph/optree.hpp"

namespace derivgraph {

namespace {

struct NumberIndex {
  std::set<std::string> known;
  std::map<std::string, std::size_t> ordinal;  // first equation with a label
};

NumberIndex index_numbers(const ParsedArticle& article) {
  NumberIndex idx;
  for (const auto& e : article.equations) {
    idx.known.insert(e.number_label);
    idx.ordinal.emplace(e.number_label, e.ordinal);
  }
  return idx;
}

// Edges from every earlier equation cited in `window` to equation `target`.
void add_cited(const ParsedArticle& article, const NumberIndex& idx, Span window,
               std::size_t target, Extraction& out) {
  if (window.empty()) return;
  for (const auto& ref : find_equation_references(article.slice(window), idx.known)) {
    std::size_t source = idx.ordinal.at(ref.number);
    if (source >= target) continue;
    out.graph.add_edge(article.equations[source].eq_id, article.equations[target].eq_id);
  }
}

Extraction empty_extraction(const ParsedArticle& article) {
  return {DerivationGraph(article.equation_ids()), {}};
}

const TextSegment& segment_of(const ParsedArticle& article, const KeyEquation& eq) {
  auto it = article.segments.find(eq.eq_id);
  if (it == article.segments.end()) {
    throw Error(fmt::format("article {} has no segments for {}", article.article_id, eq.eq_id));
  }
  return it->second;
}

void note_rejected(Extraction& out, EdgeStatus status, const std::string& u,
                   const std::string& v) {
  if (status == EdgeStatus::closes_cycle) {
    out.notices.push_back(fmt::format("dropped {} -> {}: closes a cycle", u, v));
  }
}

bool is_ascii_alnum(unsigned char c) { return c < 0x80 && std::isalnum(c); }

std::size_t utf8_length(unsigned char lead) {
  if (lead >= 0xF0) return 4;
  if (lead >= 0xE0) return 3;
  if (lead >= 0xC0) return 2;
  return 1;
}

}  // namespace

Extraction brute_force(const ParsedArticle& article) {
  Extraction out = empty_extraction(article);
  const NumberIndex idx = index_numbers(article);
  for (const auto& eq : article.equations) {
    add_cited(article, idx, segment_of(article, eq).containing_sentence, eq.ordinal, out);
  }
  return out;
}

Extraction segmentation(const ParsedArticle& article) {
  Extraction out = empty_extraction(article);
  const NumberIndex idx = index_numbers(article);
  for (const auto& eq : article.equations) {
    const TextSegment& seg = segment_of(article, eq);
    add_cited(article, idx, seg.paragraph_before, eq.ordinal, out);
    add_cited(article, idx, seg.sentence_after, eq.ordinal, out);
  }
  return out;
}

LcsRating lcs_rating(std::string_view a, std::string_view b, LcsDenominator denom) {
  if (a.empty() || b.empty()) return {};
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  std::size_t best = 0;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : 0;
      best = std::max(best, cur[j]);
    }
    std::swap(prev, cur);
  }
  const std::size_t d = denom == LcsDenominator::shorter ? std::min(a.size(), b.size())
                                                         : std::max(a.size(), b.size());
  return {best, static_cast<double>(best) / static_cast<double>(d)};
}

Extraction common_substring_extract(const ParsedArticle& article, double threshold,
                                    LcsDenominator denom) {
  Extraction out = empty_extraction(article);
  const auto& eqs = article.equations;
  for (std::size_t later = 0; later < eqs.size(); ++later) {
    for (std::size_t earlier = 0; earlier < later; ++earlier) {
      if (lcs_rating(eqs[earlier].alttext, eqs[later].alttext, denom).ratio > threshold) {
        out.graph.add_edge(eqs[earlier].eq_id, eqs[later].eq_id);
      }
    }
  }
  return out;
}

std::set<std::string> tokenize_alttext(std::string_view s) {
  std::set<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    if (c < 0x80 && std::isspace(c)) {
      ++i;
    } else if (is_ascii_alnum(c)) {
      std::size_t j = i;
      while (j < s.size() && is_ascii_alnum(static_cast<unsigned char>(s[j]))) ++j;
      out.emplace(s.substr(i, j - i));
      i = j;
    } else {
      std::size_t len = std::min(utf8_length(c), s.size() - i);
      out.emplace(s.substr(i, len));
      i += len;
    }
  }
  return out;
}

std::optional<TokenPercentages> token_percentages(const std::set<std::string>& a,
                                                  const std::set<std::string>& b) {
  if (a.empty() || b.empty()) return std::nullopt;
  std::size_t common = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  return TokenPercentages{static_cast<double>(common) / static_cast<double>(a.size()),
                          static_cast<double>(common) / static_cast<double>(b.size())};
}

std::string_view to_string(Direction d) {
  return d == Direction::greater ? "greater" : "lesser";
}

Direction parse_direction(std::string_view s) {
  if (s == "greater") return Direction::greater;
  if (s == "lesser") return Direction::lesser;
  throw UsageError(fmt::format("direction must be greater or lesser, got '{}'", s));
}

void TokenSimParams::validate() const {
  if (strictness < 0 || strictness > 2) {
    throw UsageError(fmt::format("strictness must be 0, 1 or 2, got {}", strictness));
  }
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw UsageError(fmt::format("threshold must lie in [0, 1], got {}", threshold));
  }
}

Extraction token_similarity_extract(const ParsedArticle& article,
                                    const TokenSimParams& params) {
  params.validate();
  Extraction out = empty_extraction(article);
  const auto& eqs = article.equations;
  std::vector<std::set<std::string>> tokens;
  tokens.reserve(eqs.size());
  for (const auto& e : eqs) tokens.push_back(tokenize_alttext(e.alttext));

  for (std::size_t i = 0; i < eqs.size(); ++i) {
    for (std::size_t j = i + 1; j < eqs.size(); ++j) {
      auto p = token_percentages(tokens[i], tokens[j]);
      if (!p) {
        out.notices.push_back(fmt::format("skipped {} / {}: empty token set",
                                          eqs[i].eq_id, eqs[j].eq_id));
        continue;
      }
      const bool a = p->p12 > params.threshold;
      const bool b = p->p21 > params.threshold;
      const bool pass = params.strictness == 0   ? true
                        : params.strictness == 1 ? (a || b)
                                                 : (a && b);
      if (!pass) continue;
      bool forward = p->p12 > p->p21;
      if (params.direction == Direction::lesser) forward = !forward;
      const std::string& u = forward ? eqs[i].eq_id : eqs[j].eq_id;
      const std::string& v = forward ? eqs[j].eq_id : eqs[i].eq_id;
      note_rejected(out, out.graph.add_edge(u, v), u, v);
    }
  }
  return out;
}

Extraction subtree_extract(const ParsedArticle& article, double threshold) {
  Extraction out = segmentation(article);
  const auto& eqs = article.equations;
  std::vector<std::optional<OpTree>> trees(eqs.size());
  for (std::size_t i = 0; i < eqs.size(); ++i) {
    if (eqs[i].mathml.empty()) {
      out.notices.push_back(fmt::format("{}: no MathML, similarity pairs skipped", eqs[i].eq_id));
      continue;
    }
    try {
      trees[i] = build_optree(eqs[i].mathml);
    } catch (const ParseError& e) {
      out.notices.push_back(
          fmt::format("{}: MathML unreadable ({}), similarity pairs skipped", eqs[i].eq_id, e.what()));
    }
  }
  for (std::size_t later = 0; later < eqs.size(); ++later) {
    for (std::size_t earlier = 0; earlier < later; ++earlier) {
      if (!trees[earlier] || !trees[later]) continue;
      if (out.graph.has_edge(eqs[earlier].eq_id, eqs[later].eq_id)) continue;
      if (subtree_similarity(*trees[earlier], *trees[later]) >= threshold) {
        out.graph.add_edge(eqs[earlier].eq_id, eqs[later].eq_id);
      }
    }
  }
  return out;
}

}  // namespace derivgraph
