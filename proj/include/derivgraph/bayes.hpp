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

// Three-class multinomial Naive Bayes over equation pairs. For a pair
// (i, j) with i before j in the article the classes are +1 (edge i -> j),
// -1 (edge j -> i) and 0 (unrelated).

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "derivgraph/analytic.hpp"
#include "derivgraph/corpus.hpp"
#include "derivgraph/ingest.hpp"

namespace derivgraph {

struct PairSample {
  std::string article_id;
  std::size_t i = 0;
  std::size_t j = 0;
  int label = 0;
  std::string feature_text;
};

/// All n(n-1)/2 pairs in (i, j) order. Labels come from `truth`, which
/// must list the same equation IDs as the article; otherwise Error.
std::vector<PairSample> build_pairs(const ParsedArticle& article,
                                    const GroundTruthEntry& truth);

/// Unlabeled pairs for prediction.
std::vector<PairSample> build_pairs(const ParsedArticle& article);

/// alttext_i, the text between the two equations (other placeholders
/// removed) and alttext_j, joined by single spaces.
std::string pair_feature(const ParsedArticle& article, std::size_t i, std::size_t j);

/// Lower-cased maximal ASCII alphanumeric runs.
std::vector<std::string> nb_tokens(std::string_view text);

using SparseRow = std::map<std::size_t, std::size_t>;  // token index -> count

struct Vectorized {
  std::vector<std::string> vocabulary;  // first-appearance order
  std::vector<SparseRow> rows;
};

Vectorized vectorize(std::span<const std::string> texts);

inline constexpr std::array<int, 3> kClasses = {-1, 0, 1};

class NBModel {
 public:
  std::size_t class_slot(int label) const;  // throws on labels outside kClasses

  /// Normalized class posteriors of a document, ordered as kClasses.
  /// Tokens outside the vocabulary are ignored.
  std::array<double, 3> posterior(std::string_view text) const;
  /// Unnormalized log joint per class.
  std::array<double, 3> log_joint(std::string_view text) const;
  /// Most probable class; ties go to 0, then +1, then -1.
  int predict(std::string_view text) const;

  std::string to_json() const;
  static NBModel from_json(std::string_view text);

  std::map<std::string, std::size_t> vocabulary;
  std::array<double, 3> log_prior{};  // -inf for a class never seen
  std::array<std::vector<double>, 3> log_likelihood;
  double alpha = 1.0;
  std::array<std::size_t, 3> class_counts{};
};

/// Throws Error on an empty sample set or a non-positive alpha.
NBModel train(std::span<const PairSample> samples, double alpha = 1.0);

Extraction nb_extract(const ParsedArticle& article, const NBModel& model);

/// Graph from per-pair labels in (i, j) order; cycle-closing edges dropped
/// in that order.
Extraction graph_from_labels(const ParsedArticle& article, std::span<const int> labels);

struct ArticleSplit {
  std::vector<std::string> train;
  std::vector<std::string> test;
};

/// Seeded article-level split; `train_fraction` of the articles (rounded
/// down, at least one when any exist) go to training.
ArticleSplit split_by_article(std::span<const std::string> article_ids,
                              double train_fraction, std::uint64_t seed);

}  // namespace derivgraph
