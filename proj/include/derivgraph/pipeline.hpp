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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "derivgraph/analytic.hpp"
#include "derivgraph/bayes.hpp"
#include "derivgraph/eval.hpp"
#include "derivgraph/llm.hpp"

namespace derivgraph {

enum class Method {
  brute_force,
  segmentation,
  common_substring,
  subtree,
  token_similarity,
  naive_bayes,
  llm,
};

Method parse_method(std::string_view name);  // throws UsageError
std::string_view method_name(Method m);
std::vector<std::string_view> method_names();

struct RunConfig {
  std::filesystem::path corpus;
  std::filesystem::path articles;
  Method method = Method::brute_force;
  // Method parameters. The threshold default depends on the method.
  std::optional<double> threshold;
  int strictness = 2;
  Direction direction = Direction::greater;
  LcsDenominator lcs_denominator = LcsDenominator::shorter;
  double train_split = 0.9;
  std::uint64_t seed = 0;
  int retries = 2;
  std::optional<std::filesystem::path> mock_llm;
  std::optional<std::string> llm_endpoint;
  std::optional<std::filesystem::path> model_path;
  std::filesystem::path out = "out";
  std::size_t jobs = 1;
  bool dot = false;

  /// Method-specific checks, run before any work starts; throws UsageError.
  void validate() const;
  double effective_threshold() const;
};

/// Transport factory for the llm method: recorded replies when a mock
/// fixture is configured, the live HTTP endpoint otherwise. Defined in
/// the derivgraph_http library.
using TransportFactory = std::function<std::unique_ptr<LlmTransport>(const std::string& article_id)>;

TransportFactory make_transport_factory(const RunConfig& config);

/// Extractor for the configured method. naive-bayes needs `model`; llm
/// needs `transports`.
Extractor make_extractor(const RunConfig& config, const NBModel* model = nullptr,
                         TransportFactory transports = {});

/// Train on the training share of `prepared` (article-level split).
struct TrainedSplit {
  NBModel model;
  ArticleSplit split;
};
TrainedSplit train_on_split(const PreparedCorpus& prepared, double train_fraction,
                            std::uint64_t seed, double alpha = 1.0);

/// The subset of `prepared` whose article IDs are listed.
PreparedCorpus select_articles(const PreparedCorpus& prepared,
                               const std::vector<std::string>& ids);

}  // namespace derivgraph
