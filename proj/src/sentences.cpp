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

#include <algorithm>
#include <array>
#include <cctype>

#include "derivgraph/ingest.hpp"

namespace derivgraph {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f';
}
bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)); }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }
bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)); }

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

// Abbreviations whose trailing period never ends a sentence (without it).
constexpr std::array<std::string_view, 11> kAbbreviations = {
    "eq", "eqs", "fig", "figs", "ref", "refs", "i.e", "e.g", "cf", "sec", "vs"};

std::string_view word_before(std::string_view text, std::size_t end) {
  std::size_t b = end;
  while (b > 0 && !is_space(text[b - 1]) && text[b - 1] != '(' &&
         text[b - 1] != '[')
    --b;
  return text.substr(b, end - b);
}

bool is_abbreviation(std::string_view text, std::size_t dot) {
  std::string w = lower(word_before(text, dot));
  if (std::find(kAbbreviations.begin(), kAbbreviations.end(), w) !=
      kAbbreviations.end())
    return true;
  if (w == "al") {
    std::size_t b = dot - w.size();
    while (b > 0 && is_space(text[b - 1])) --b;
    return lower(word_before(text, b)) == "et";
  }
  return false;
}

// Word at `pos` (case-insensitive), bounded on the left by a non-letter.
bool word_at(std::string_view s, std::size_t pos, std::string_view word) {
  if (pos > 0 && is_alpha(s[pos - 1])) return false;
  if (pos + word.size() > s.size()) return false;
  for (std::size_t k = 0; k < word.size(); ++k) {
    if (std::tolower(static_cast<unsigned char>(s[pos + k])) != word[k])
      return false;
  }
  return true;
}

// Length of a citation prefix ("Equations", "Eq.", ...) starting at pos.
std::size_t prefix_length(std::string_view s, std::size_t pos) {
  constexpr std::array<std::string_view, 4> kDotted = {"eqs.", "eq.", "eqs", "eq"};
  for (std::string_view w : {std::string_view("equations"), std::string_view("equation")}) {
    if (word_at(s, pos, w)) {
      std::size_t e = pos + w.size();
      if (e >= s.size() || !is_alpha(s[e])) return w.size();
    }
  }
  for (std::string_view w : kDotted) {
    if (word_at(s, pos, w)) {
      std::size_t e = pos + w.size();
      if (w.back() == '.' || e >= s.size() || !is_alpha(s[e])) return w.size();
    }
  }
  return 0;
}

bool is_number_char(char c) { return is_alnum(c) || c == '.'; }

}  // namespace

std::vector<Span> split_sentences(std::string_view text) {
  std::vector<Span> out;
  std::size_t first = 0;
  while (first < text.size() && is_space(text[first])) ++first;
  if (first == text.size()) return out;

  std::size_t start = 0;
  for (std::size_t i = first; i < text.size(); ++i) {
    char c = text[i];
    if (c != '.' && c != '!' && c != '?') continue;
    if (c == '.' && is_abbreviation(text, i)) continue;
    std::size_t j = i + 1;
    while (j < text.size() && (text[j] == '"' || text[j] == '\'' ||
                               text[j] == ')' || text[j] == ']'))
      ++j;
    std::size_t k = j;
    while (k < text.size() && is_space(text[k])) ++k;
    if (k == text.size()) break;  // final sentence runs to the end
    if (k == j) continue;         // needs whitespace after the terminator
    if (!is_upper(text[k]) && !is_digit(text[k])) continue;
    out.push_back({start, k});
    start = k;
    i = k - 1;
  }
  out.push_back({start, text.size()});
  return out;
}

std::vector<EquationReference> find_equation_references(
    std::string_view s, const std::set<std::string>& known) {
  std::vector<EquationReference> hits;
  std::size_t pending_prefix = std::string_view::npos;  // start of "Eq." etc.
  std::size_t i = 0;
  while (i < s.size()) {
    if (std::size_t plen = prefix_length(s, i); plen > 0) {
      std::size_t j = i + plen;
      std::size_t k = j;
      while (k < s.size() && is_space(s[k])) ++k;
      if (k < s.size() && s[k] == '(') {
        pending_prefix = i;
        i = k;
        continue;
      }
      // Bare form: "equation 4", "Eq. 4" (not "equations 4").
      const bool bare_ok = s.substr(i, plen).size() == 8 || s[i + plen - 1] == '.';
      if (k > j && k < s.size() && is_digit(s[k]) && bare_ok) {
        std::size_t e = k;
        while (e < s.size() && is_number_char(s[e])) ++e;
        std::string num(s.substr(k, e - k));
        while (!num.empty() && num.back() == '.') num.pop_back();
        if (known.count(num)) hits.push_back({i, num});
        i = e;
        continue;
      }
      i = j;
      continue;
    }
    if (s[i] == '(') {
      std::size_t k = i + 1;
      while (k < s.size() && is_space(s[k])) ++k;
      std::size_t b = k;
      while (k < s.size() && is_number_char(s[k])) ++k;
      std::size_t e = k;
      while (k < s.size() && is_space(s[k])) ++k;
      if (e > b && k < s.size() && s[k] == ')') {
        std::string num(s.substr(b, e - b));
        if (known.count(num)) {
          hits.push_back({pending_prefix != std::string_view::npos ? pending_prefix : i, num});
        }
        pending_prefix = std::string_view::npos;
        i = k + 1;
        continue;
      }
    }
    pending_prefix = std::string_view::npos;
    ++i;
  }
  return hits;
}

}  // namespace derivgraph
