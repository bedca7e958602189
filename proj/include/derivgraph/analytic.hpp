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

// Rule-based extractors. Each returns a DAG over the article's key
// equations plus any notices raised on the way.

#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "derivgraph/error.hpp"
#include "derivgraph/graph.hpp"
#include "derivgraph/ingest.hpp"

namespace derivgraph {

struct Extraction {
  DerivationGraph graph;
  Notices notices;
};

/// Edges V2 -> V1 for every earlier V2 cited in the sentence that leads
/// into V1.
Extraction brute_force(const ParsedArticle& article);

/// Like brute_force, searching the paragraph before V1 and the sentence
/// after it.
Extraction segmentation(const ParsedArticle& article);

enum class LcsDenominator { shorter, longer };

struct LcsRating {
  std::size_t length = 0;
  double ratio = 0.0;
  bool operator==(const LcsRating&) const = default;
};

/// Longest common contiguous substring (bytes) and its share of the
/// shorter (or longer) input.
LcsRating lcs_rating(std::string_view a, std::string_view b,
                     LcsDenominator denom = LcsDenominator::shorter);

/// Edge earlier -> later whenever the LCS ratio of the alttexts exceeds
/// `threshold`.
Extraction common_substring_extract(const ParsedArticle& article, double threshold,
                                    LcsDenominator denom = LcsDenominator::shorter);

/// Maximal alphanumeric runs, plus every other non-space character (one
/// UTF-8 code point) as its own token.
std::set<std::string> tokenize_alttext(std::string_view alttext);

struct TokenPercentages {
  double p12 = 0.0;  // |A ∩ B| / |A|
  double p21 = 0.0;  // |A ∩ B| / |B|
};

/// Undefined (nullopt) when either set is empty.
std::optional<TokenPercentages> token_percentages(const std::set<std::string>& a,
                                                  const std::set<std::string>& b);

enum class Direction { greater, lesser };

std::string_view to_string(Direction d);
Direction parse_direction(std::string_view s);  // throws UsageError

struct TokenSimParams {
  int strictness = 2;
  Direction direction = Direction::greater;
  double threshold = 0.98;

  void validate() const;  // throws UsageError
};

Extraction token_similarity_extract(const ParsedArticle& article,
                                    const TokenSimParams& params);

/// Explicit citations first (segmentation windows), then OpTree similarity
/// at or above `threshold` for the remaining earlier/later pairs.
Extraction subtree_extract(const ParsedArticle& article, double threshold);

}  // namespace derivgraph
