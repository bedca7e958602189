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

#include "derivgraph/bayes.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

namespace derivgraph {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool is_ascii_alnum(char c) {
  auto u = static_cast<unsigned char>(c);
  return u < 0x80 && std::isalnum(u);
}

// Text with every "[[...]]" placeholder cut out and whitespace collapsed.
std::string strip_placeholders(std::string_view s) {
  std::string out;
  bool space = false;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s.compare(i, 2, "[[") == 0) {
      std::size_t close = s.find("]]", i + 2);
      if (close != std::string_view::npos) {
        i = close + 2;
        space = true;
        continue;
      }
    }
    char c = s[i++];
    if (c == ' ' || c == '\n' || c == '\t' || c == '\r') {
      space = true;
      continue;
    }
    if (space && !out.empty()) out += ' ';
    space = false;
    out += c;
  }
  return out;
}

}  // namespace

std::string pair_feature(const ParsedArticle& article, std::size_t i, std::size_t j) {
  const KeyEquation& a = article.equations.at(i);
  const KeyEquation& b = article.equations.at(j);
  std::string between;
  if (b.position > a.end()) {
    between = strip_placeholders(std::string_view(article.text).substr(a.end(), b.position - a.end()));
  }
  return a.alttext + " " + between + " " + b.alttext;
}

std::vector<PairSample> build_pairs(const ParsedArticle& article) {
  std::vector<PairSample> out;
  const std::size_t n = article.equations.size();
  out.reserve(n * (n > 0 ? n - 1 : 0) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      out.push_back({article.article_id, i, j, 0, pair_feature(article, i, j)});
    }
  }
  return out;
}

std::vector<PairSample> build_pairs(const ParsedArticle& article,
                                    const GroundTruthEntry& truth) {
  std::vector<std::string> ids = article.equation_ids();
  if (ids != truth.equation_ids) {
    std::set<std::string> a(ids.begin(), ids.end());
    std::set<std::string> b(truth.equation_ids.begin(), truth.equation_ids.end());
    std::vector<std::string> diff;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                  std::back_inserter(diff));
    throw Error(fmt::format("article {}: equations do not match ground truth ({})",
                            article.article_id,
                            diff.empty() ? std::string("order differs")
                                         : fmt::format("differ: {}", fmt::join(diff, ", "))));
  }
  auto has = [&](const std::string& u, const std::string& v) {
    auto it = truth.adjacency.find(u);
    if (it == truth.adjacency.end()) return false;
    return std::find(it->second.begin(), it->second.end(), v) != it->second.end();
  };
  std::vector<PairSample> out = build_pairs(article);
  for (auto& s : out) {
    const std::string& u = ids[s.i];
    const std::string& v = ids[s.j];
    s.label = has(u, v) ? 1 : has(v, u) ? -1 : 0;
  }
  return out;
}

std::vector<std::string> nb_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_ascii_alnum(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    std::string tok;
    while (j < text.size() && is_ascii_alnum(text[j])) {
      tok += static_cast<char>(std::tolower(static_cast<unsigned char>(text[j])));
      ++j;
    }
    out.push_back(std::move(tok));
    i = j;
  }
  return out;
}

Vectorized vectorize(std::span<const std::string> texts) {
  Vectorized v;
  std::map<std::string, std::size_t> index;
  for (const auto& t : texts) {
    SparseRow row;
    for (auto& tok : nb_tokens(t)) {
      auto [it, fresh] = index.emplace(tok, v.vocabulary.size());
      if (fresh) v.vocabulary.push_back(tok);
      ++row[it->second];
    }
    v.rows.push_back(std::move(row));
  }
  return v;
}

std::size_t NBModel::class_slot(int label) const {
  for (std::size_t k = 0; k < kClasses.size(); ++k) {
    if (kClasses[k] == label) return k;
  }
  throw Error(fmt::format("label {} is not one of -1, 0, +1", label));
}

std::array<double, 3> NBModel::log_joint(std::string_view text) const {
  std::array<double, 3> out = log_prior;
  for (const auto& tok : nb_tokens(text)) {
    auto it = vocabulary.find(tok);
    if (it == vocabulary.end()) continue;
    for (std::size_t k = 0; k < 3; ++k) {
      if (out[k] != kNegInf) out[k] += log_likelihood[k][it->second];
    }
  }
  return out;
}

std::array<double, 3> NBModel::posterior(std::string_view text) const {
  auto lj = log_joint(text);
  const double m = *std::max_element(lj.begin(), lj.end());
  std::array<double, 3> out{};
  if (m == kNegInf) return out;
  double z = 0.0;
  for (std::size_t k = 0; k < 3; ++k) {
    out[k] = lj[k] == kNegInf ? 0.0 : std::exp(lj[k] - m);
    z += out[k];
  }
  for (auto& p : out) p /= z;
  return out;
}

int NBModel::predict(std::string_view text) const {
  auto lj = log_joint(text);
  constexpr std::array<std::size_t, 3> kPreference = {1, 2, 0};  // 0, +1, -1
  std::size_t best = kPreference[0];
  for (std::size_t slot : kPreference) {
    if (lj[slot] > lj[best]) best = slot;
  }
  return kClasses[best];
}

NBModel train(std::span<const PairSample> samples, double alpha) {
  if (samples.empty()) throw Error("cannot train on an empty sample set");
  if (!(alpha > 0.0)) throw Error(fmt::format("smoothing must be positive, got {}", alpha));
  NBModel model;
  model.alpha = alpha;

  std::vector<std::string> texts;
  texts.reserve(samples.size());
  for (const auto& s : samples) texts.push_back(s.feature_text);
  Vectorized vec = vectorize(texts);
  for (std::size_t t = 0; t < vec.vocabulary.size(); ++t) model.vocabulary.emplace(vec.vocabulary[t], t);

  const std::size_t V = vec.vocabulary.size();
  std::array<std::vector<double>, 3> counts;
  std::array<double, 3> totals{};
  for (auto& c : counts) c.assign(V, 0.0);
  for (std::size_t r = 0; r < samples.size(); ++r) {
    const std::size_t k = model.class_slot(samples[r].label);
    ++model.class_counts[k];
    for (const auto& [t, n] : vec.rows[r]) {
      counts[k][t] += static_cast<double>(n);
      totals[k] += static_cast<double>(n);
    }
  }
  const double N = static_cast<double>(samples.size());
  for (std::size_t k = 0; k < 3; ++k) {
    model.log_prior[k] = model.class_counts[k] == 0
                             ? kNegInf
                             : std::log(static_cast<double>(model.class_counts[k]) / N);
    const double denom = totals[k] + alpha * static_cast<double>(V);
    model.log_likelihood[k].resize(V);
    for (std::size_t t = 0; t < V; ++t) {
      model.log_likelihood[k][t] = std::log((counts[k][t] + alpha) / denom);
    }
  }
  return model;
}

std::string NBModel::to_json() const {
  using nlohmann::ordered_json;
  ordered_json j;
  j["classes"] = kClasses;
  j["alpha"] = alpha;
  j["class_counts"] = class_counts;
  ordered_json priors = ordered_json::array();
  for (double p : log_prior) {
    if (p == kNegInf) {
      priors.push_back(nullptr);
    } else {
      priors.push_back(p);
    }
  }
  j["log_prior"] = priors;
  std::vector<std::string> vocab(vocabulary.size());
  for (const auto& [tok, t] : vocabulary) vocab[t] = tok;
  j["vocabulary"] = vocab;
  j["log_likelihood"] = log_likelihood;
  return j.dump(2) + "\n";
}

NBModel NBModel::from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(fmt::format("model JSON: {}", e.what()), e.byte);
  }
  NBModel m;
  try {
    if (j.at("classes").get<std::vector<int>>() != std::vector<int>(kClasses.begin(), kClasses.end())) {
      throw Error("model classes must be [-1, 0, 1]");
    }
    m.alpha = j.at("alpha").get<double>();
    m.class_counts = j.at("class_counts").get<std::array<std::size_t, 3>>();
    const auto& priors = j.at("log_prior");
    if (!priors.is_array() || priors.size() != 3) throw Error("model log_prior must have 3 entries");
    for (std::size_t k = 0; k < 3; ++k) {
      m.log_prior[k] = priors[k].is_null() ? kNegInf : priors[k].get<double>();
    }
    auto vocab = j.at("vocabulary").get<std::vector<std::string>>();
    for (std::size_t t = 0; t < vocab.size(); ++t) m.vocabulary.emplace(vocab[t], t);
    m.log_likelihood = j.at("log_likelihood").get<std::array<std::vector<double>, 3>>();
    for (const auto& row : m.log_likelihood) {
      if (row.size() != vocab.size()) throw Error("model likelihood rows do not match vocabulary");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(fmt::format("model JSON: {}", e.what()));
  }
  return m;
}

Extraction graph_from_labels(const ParsedArticle& article, std::span<const int> labels) {
  Extraction out{DerivationGraph(article.equation_ids()), {}};
  const auto& eqs = article.equations;
  std::size_t k = 0;
  for (std::size_t i = 0; i < eqs.size(); ++i) {
    for (std::size_t j = i + 1; j < eqs.size(); ++j, ++k) {
      if (k >= labels.size()) throw Error("fewer labels than equation pairs");
      if (labels[k] == 0) continue;
      const std::string& u = labels[k] > 0 ? eqs[i].eq_id : eqs[j].eq_id;
      const std::string& v = labels[k] > 0 ? eqs[j].eq_id : eqs[i].eq_id;
      if (out.graph.add_edge(u, v) == EdgeStatus::closes_cycle) {
        out.notices.push_back(fmt::format("dropped {} -> {}: closes a cycle", u, v));
      }
    }
  }
  return out;
}

Extraction nb_extract(const ParsedArticle& article, const NBModel& model) {
  std::vector<int> labels;
  for (const auto& s : build_pairs(article)) labels.push_back(model.predict(s.feature_text));
  return graph_from_labels(article, labels);
}

ArticleSplit split_by_article(std::span<const std::string> article_ids,
                              double train_fraction, std::uint64_t seed) {
  if (!(train_fraction >= 0.0 && train_fraction <= 1.0)) {
    throw UsageError(fmt::format("train split must lie in [0, 1], got {}", train_fraction));
  }
  std::vector<std::string> ids(article_ids.begin(), article_ids.end());
  // Fisher-Yates with raw engine output, so the split does not depend on
  // the standard library's distribution implementation.
  std::mt19937_64 rng(seed);
  for (std::size_t i = ids.size(); i > 1; --i) {
    std::swap(ids[i - 1], ids[rng() % i]);
  }
  auto n_train = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(ids.size())));
  if (n_train == 0 && !ids.empty() && train_fraction > 0.0) n_train = 1;
  ArticleSplit split;
  split.train.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_train));
  split.test.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_train), ids.end());
  return split;
}

}  // namespace derivgraph
