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

// Scoring of predicted graphs. Every ordered pair (u, v), u != v, of an
// article's equations is one binary decision: edge or no edge.

#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "derivgraph/analytic.hpp"
#include "derivgraph/corpus.hpp"
#include "derivgraph/graph.hpp"
#include "derivgraph/ingest.hpp"
#include "derivgraph/seed.hpp"

namespace derivgraph {

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
  ConfusionCounts& operator+=(const ConfusionCounts& o);
  bool operator==(const ConfusionCounts&) const = default;
};

/// Throws GraphError when the node sets differ, naming the difference.
ConfusionCounts confusion(const DerivationGraph& predicted, const DerivationGraph& truth);

/// nullopt marks a 0/0 metric.
struct MetricsReport {
  std::optional<double> accuracy;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
};

MetricsReport metrics(const ConfusionCounts& c);

/// "{:.6f}", or "NA" when undefined.
std::string format_metric(std::optional<double> v);

struct ReferenceRow {
  std::string label;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Published corpus-level figures keyed by method name ("brute-force",
/// "token-similarity", "naive-bayes", "llm").
const std::map<std::string, ReferenceRow>& published_reference_rows();
const ReferenceRow& published_seed_reference();

class ArticleSource {
 public:
  virtual ~ArticleSource() = default;
  /// HTML of the article, or nullopt when unavailable.
  virtual std::optional<std::string> html(const std::string& article_id) const = 0;
};

/// <dir>/<article id>.html
class DirectorySource : public ArticleSource {
 public:
  explicit DirectorySource(std::filesystem::path dir);
  std::optional<std::string> html(const std::string& article_id) const override;

 private:
  std::filesystem::path dir_;
};

class MemorySource : public ArticleSource {
 public:
  explicit MemorySource(std::map<std::string, std::string> pages) : pages_(std::move(pages)) {}
  std::optional<std::string> html(const std::string& article_id) const override;

 private:
  std::map<std::string, std::string> pages_;
};

struct SkippedArticle {
  std::string article_id;
  std::string reason;
};

/// An article parsed and reduced to its ground-truth equations.
struct PreparedArticle {
  ParsedArticle article;
  const GroundTruthEntry* truth = nullptr;
  DerivationGraph truth_graph;
};

struct PreparedCorpus {
  std::vector<PreparedArticle> articles;
  std::vector<SkippedArticle> skipped;
};

/// Missing or unreadable HTML, or ground-truth equations absent from the
/// HTML, skip the article with a reason.
PreparedCorpus prepare_corpus(std::span<const GroundTruthEntry> corpus,
                              const ArticleSource& source, std::size_t jobs = 1);

struct ArticleResult {
  std::string article_id;
  ConfusionCounts counts;
  MetricsReport metrics;
  std::size_t predicted_edges = 0;
  Notices notices;
};

struct EvaluationReport {
  std::string method;
  std::vector<ArticleResult> articles;  // corpus order
  std::vector<SkippedArticle> skipped;
  ConfusionCounts micro_counts;
  MetricsReport micro;
  MetricsReport macro;
  std::optional<ReferenceRow> reference;

  /// Columns: article_id,tp,fp,fn,tn,accuracy,precision,recall,f1; the
  /// per-article rows are followed by micro, macro and reference rows.
  std::string to_csv() const;
  std::string to_json() const;
};

using Extractor = std::function<Extraction(const ParsedArticle&)>;

EvaluationReport evaluate_prepared(const std::string& method, const Extractor& extract,
                                   const PreparedCorpus& prepared, std::size_t jobs = 1);

EvaluationReport evaluate_corpus(const std::string& method, const Extractor& extract,
                                 std::span<const GroundTruthEntry> corpus,
                                 const ArticleSource& source, std::size_t jobs = 1);

/// Score stored predictions (corpus-schema records) against the corpus.
EvaluationReport evaluate_predictions(const std::string& method,
                                      std::span<const GroundTruthEntry> corpus,
                                      std::span<const GroundTruthEntry> predictions);

/// Fill micro/macro aggregates from the per-article rows.
void aggregate(EvaluationReport& report);

struct SweepRow {
  TokenSimParams params;
  ConfusionCounts counts;
  MetricsReport metrics;
  std::size_t predicted_edges = 0;
};

/// One row per parameter triple, sorted by (strictness, direction, threshold).
std::vector<SweepRow> sweep_token_similarity(const PreparedCorpus& prepared,
                                             std::span<const double> thresholds,
                                             std::span<const int> strictness,
                                             std::span<const Direction> directions,
                                             std::size_t jobs = 1);

/// Columns: strictness,direction,threshold,tp,fp,fn,tn,accuracy,precision,recall,f1
std::string sweep_csv(std::span<const SweepRow> rows);

struct SeedArticleResult {
  std::string article_id;
  std::string most_important;
  std::vector<std::string> candidates;
  bool hit = false;
  ConfusionCounts counts;  // tp = hit, fp = |candidates| - tp, fn = 1 - tp
};

struct SeedReport {
  std::vector<SeedArticleResult> articles;
  std::vector<SkippedArticle> skipped;
  ConfusionCounts micro_counts;
  MetricsReport micro;
  ReferenceRow reference;

  /// Columns: article_id,most_important,candidates,hit,tp,fp,fn,accuracy,
  /// precision,recall,f1; candidates are ';'-separated.
  std::string to_csv() const;
  std::string to_json() const;
};

/// Seed candidates per article on the ground-truth graphs, or on
/// `graphs` (keyed by article ID) when given.
SeedReport evaluate_seed(std::span<const GroundTruthEntry> corpus, const SeedConfig& config = {},
                         const std::map<std::string, DerivationGraph>* graphs = nullptr);

}  // namespace derivgraph
