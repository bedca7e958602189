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

#include "derivgraph/pipeline.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <set>
#include <utility>

#include <fmt/format.h>

namespace derivgraph {

namespace {

constexpr std::array<std::pair<Method, std::string_view>, 7> kMethods = {{
    {Method::brute_force, "brute-force"},
    {Method::segmentation, "segmentation"},
    {Method::common_substring, "common-substring"},
    {Method::subtree, "subtree"},
    {Method::token_similarity, "token-similarity"},
    {Method::naive_bayes, "naive-bayes"},
    {Method::llm, "llm"},
}};

}  // namespace

Method parse_method(std::string_view name) {
  for (const auto& [m, n] : kMethods) {
    if (n == name) return m;
  }
  throw UsageError(fmt::format("unknown method '{}' (expected one of: {})", name,
                               fmt::join(method_names(), ", ")));
}

std::string_view method_name(Method m) {
  for (const auto& [k, n] : kMethods) {
    if (k == m) return n;
  }
  return "?";
}

std::vector<std::string_view> method_names() {
  std::vector<std::string_view> out;
  for (const auto& [m, n] : kMethods) out.push_back(n);
  return out;
}

double RunConfig::effective_threshold() const {
  if (threshold) return *threshold;
  switch (method) {
    case Method::token_similarity: return 0.98;
    case Method::common_substring: return 0.9;
    case Method::subtree: return 0.9;
    default: return 0.0;
  }
}

void RunConfig::validate() const {
  if (jobs == 0) throw UsageError("--jobs must be at least 1");
  const double t = effective_threshold();
  if (!std::isfinite(t)) throw UsageError("--threshold must be a finite number");
  switch (method) {
    case Method::token_similarity:
      TokenSimParams{strictness, direction, t}.validate();
      break;
    case Method::common_substring:
      if (t < 0.0 || t > 1.0) throw UsageError(fmt::format("--threshold must lie in [0, 1], got {}", t));
      break;
    case Method::subtree:
      if (t < 0.0) throw UsageError(fmt::format("--threshold must be non-negative, got {}", t));
      break;
    case Method::naive_bayes:
      if (!model_path && !(train_split > 0.0 && train_split < 1.0)) {
        throw UsageError(fmt::format("--train-split must lie strictly between 0 and 1, got {}", train_split));
      }
      break;
    case Method::llm:
      if (retries < 0) throw UsageError("--retries must be non-negative");
      if (!mock_llm && !llm_endpoint && !std::getenv("DERIVGRAPH_LLM_ENDPOINT")) {
        throw UsageError("llm needs --mock-llm, --llm-endpoint or DERIVGRAPH_LLM_ENDPOINT");
      }
      break;
    case Method::brute_force:
    case Method::segmentation:
      break;
  }
}

Extractor make_extractor(const RunConfig& config, const NBModel* model,
                         TransportFactory transports) {
  config.validate();
  const double t = config.effective_threshold();
  switch (config.method) {
    case Method::brute_force:
      return [](const ParsedArticle& a) { return brute_force(a); };
    case Method::segmentation:
      return [](const ParsedArticle& a) { return segmentation(a); };
    case Method::common_substring:
      return [t, d = config.lcs_denominator](const ParsedArticle& a) {
        return common_substring_extract(a, t, d);
      };
    case Method::subtree:
      return [t](const ParsedArticle& a) { return subtree_extract(a, t); };
    case Method::token_similarity:
      return [p = TokenSimParams{config.strictness, config.direction, t}](const ParsedArticle& a) {
        return token_similarity_extract(a, p);
      };
    case Method::naive_bayes:
      if (!model) throw UsageError("naive-bayes needs a trained model");
      return [model](const ParsedArticle& a) { return nb_extract(a, *model); };
    case Method::llm:
      if (!transports) throw UsageError("llm needs a transport");
      return [transports = std::move(transports), retries = config.retries](const ParsedArticle& a) {
        auto transport = transports(a.article_id);
        return extract_via_llm(*transport, a, retries).result;
      };
  }
  throw UsageError("unhandled method");
}

PreparedCorpus select_articles(const PreparedCorpus& prepared,
                               const std::vector<std::string>& ids) {
  const std::set<std::string> wanted(ids.begin(), ids.end());
  PreparedCorpus out;
  out.skipped = prepared.skipped;
  for (const auto& a : prepared.articles) {
    if (wanted.count(a.article.article_id)) out.articles.push_back(a);
  }
  return out;
}

TrainedSplit train_on_split(const PreparedCorpus& prepared, double train_fraction,
                            std::uint64_t seed, double alpha) {
  std::vector<std::string> ids;
  for (const auto& a : prepared.articles) ids.push_back(a.article.article_id);
  TrainedSplit out;
  out.split = split_by_article(ids, train_fraction, seed);
  const std::set<std::string> train_ids(out.split.train.begin(), out.split.train.end());
  std::vector<PairSample> samples;
  for (const auto& a : prepared.articles) {
    if (!train_ids.count(a.article.article_id)) continue;
    auto pairs = build_pairs(a.article, *a.truth);
    samples.insert(samples.end(), std::make_move_iterator(pairs.begin()),
                   std::make_move_iterator(pairs.end()));
  }
  out.model = train(samples, alpha);
  return out;
}

}  // namespace derivgraph
