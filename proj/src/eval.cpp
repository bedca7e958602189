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

#include "derivgraph/eval.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include <fmt/format.h>
#include <json.hpp>

#include "derivgraph/parallel.hpp"

namespace derivgraph {

namespace {

using nlohmann::ordered_json;

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

ordered_json metric_json(std::optional<double> v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json counts_json(const ConfusionCounts& c) {
  return {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}, {"tn", c.tn}};
}

ordered_json metrics_json(const MetricsReport& m) {
  return {{"accuracy", metric_json(m.accuracy)},
          {"precision", metric_json(m.precision)},
          {"recall", metric_json(m.recall)},
          {"f1", metric_json(m.f1)}};
}

ordered_json reference_json(const ReferenceRow& r) {
  return {{"label", r.label},
          {"accuracy", r.accuracy},
          {"precision", r.precision},
          {"recall", r.recall},
          {"f1", r.f1}};
}

std::string metrics_csv(const MetricsReport& m) {
  return fmt::format("{},{},{},{}", format_metric(m.accuracy), format_metric(m.precision),
                     format_metric(m.recall), format_metric(m.f1));
}

std::string reference_csv(const ReferenceRow& r) {
  return fmt::format("{:.6f},{:.6f},{:.6f},{:.6f}", r.accuracy, r.precision, r.recall, r.f1);
}

// Mean of the defined values; nullopt if none are.
std::optional<double> mean_defined(const std::vector<std::optional<double>>& values) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& v : values) {
    if (v) {
      sum += *v;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

// RFC 4180 quoting.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

ConfusionCounts& ConfusionCounts::operator+=(const ConfusionCounts& o) {
  tp += o.tp;
  fp += o.fp;
  fn += o.fn;
  tn += o.tn;
  return *this;
}

ConfusionCounts confusion(const DerivationGraph& predicted, const DerivationGraph& truth) {
  std::set<std::string> a(predicted.nodes().begin(), predicted.nodes().end());
  std::set<std::string> b(truth.nodes().begin(), truth.nodes().end());
  if (a != b) {
    std::vector<std::string> diff;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                  std::back_inserter(diff));
    throw GraphError(fmt::format("node sets differ: {}", fmt::join(diff, ", ")));
  }
  ConfusionCounts c;
  const auto& nodes = truth.nodes();
  for (const auto& u : nodes) {
    for (const auto& v : nodes) {
      if (u == v) continue;
      const bool p = predicted.has_edge(u, v);
      const bool t = truth.has_edge(u, v);
      if (p && t) {
        ++c.tp;
      } else if (p) {
        ++c.fp;
      } else if (t) {
        ++c.fn;
      } else {
        ++c.tn;
      }
    }
  }
  return c;
}

MetricsReport metrics(const ConfusionCounts& c) {
  MetricsReport m;
  m.accuracy = ratio(c.tp + c.tn, c.total());
  m.precision = ratio(c.tp, c.tp + c.fp);
  m.recall = ratio(c.tp, c.tp + c.fn);
  if (m.precision && m.recall && *m.precision + *m.recall > 0.0) {
    m.f1 = 2.0 * *m.precision * *m.recall / (*m.precision + *m.recall);
  } else if (m.precision && m.recall) {
    m.f1 = 0.0;
  }
  return m;
}

std::string format_metric(std::optional<double> v) {
  return v ? fmt::format("{:.6f}", *v) : std::string("NA");
}

const std::map<std::string, ReferenceRow>& published_reference_rows() {
  static const std::map<std::string, ReferenceRow> rows = {
      {"brute-force", {"Brute Force", 0.913, 0.484, 0.492, 0.488}},
      {"token-similarity", {"Token String Similarity (2, greater, 98%)", 0.899, 0.404, 0.365, 0.384}},
      {"naive-bayes", {"Naive Bayes (90%)", 0.894, 0.462, 0.449, 0.455}},
      {"llm", {"Gemini LLM", 0.907, 0.464, 0.503, 0.483}},
  };
  return rows;
}

const ReferenceRow& published_seed_reference() {
  static const ReferenceRow row{"Seed Equation Correctness", 0.371, 0.397, 0.850, 0.542};
  return row;
}

DirectorySource::DirectorySource(std::filesystem::path dir) : dir_(std::move(dir)) {
  if (!std::filesystem::is_directory(dir_)) {
    throw IoError(fmt::format("articles directory {} does not exist", dir_.string()));
  }
}

std::optional<std::string> DirectorySource::html(const std::string& article_id) const {
  const auto path = dir_ / (article_id + ".html");
  if (!std::filesystem::is_regular_file(path)) return std::nullopt;
  return read_file(path);
}

std::optional<std::string> MemorySource::html(const std::string& article_id) const {
  auto it = pages_.find(article_id);
  if (it == pages_.end()) return std::nullopt;
  return it->second;
}

PreparedCorpus prepare_corpus(std::span<const GroundTruthEntry> corpus,
                              const ArticleSource& source, std::size_t jobs) {
  struct Outcome {
    std::optional<PreparedArticle> article;
    std::optional<SkippedArticle> skipped;
  };
  std::vector<const GroundTruthEntry*> entries;
  for (const auto& e : corpus) entries.push_back(&e);
  auto outcomes = parallel_map(entries, jobs, [&](const GroundTruthEntry* e) -> Outcome {
    auto html = source.html(e->article_id);
    if (!html) return {std::nullopt, SkippedArticle{e->article_id, "article HTML not found"}};
    ParsedArticle parsed;
    try {
      parsed = parse_article(*html, e->article_id);
    } catch (const Error& err) {
      return {std::nullopt, SkippedArticle{e->article_id, fmt::format("unreadable HTML: {}", err.what())}};
    }
    std::vector<std::string> missing;
    ParsedArticle restricted = restrict_to(parsed, e->equation_ids, &missing);
    if (!missing.empty()) {
      return {std::nullopt,
              SkippedArticle{e->article_id, fmt::format("equations not found in HTML: {}",
                                                        fmt::join(missing, ", "))}};
    }
    if (restricted.equation_ids() != e->equation_ids) {
      return {std::nullopt,
              SkippedArticle{e->article_id, "equation order in HTML differs from ground truth"}};
    }
    return {PreparedArticle{std::move(restricted), e, graph_from_entry(*e)}, std::nullopt};
  });
  PreparedCorpus out;
  for (auto& o : outcomes) {
    if (o.article) out.articles.push_back(std::move(*o.article));
    if (o.skipped) out.skipped.push_back(std::move(*o.skipped));
  }
  return out;
}

void aggregate(EvaluationReport& report) {
  report.micro_counts = {};
  std::vector<std::optional<double>> acc, prec, rec, f1;
  for (const auto& a : report.articles) {
    report.micro_counts += a.counts;
    acc.push_back(a.metrics.accuracy);
    prec.push_back(a.metrics.precision);
    rec.push_back(a.metrics.recall);
    f1.push_back(a.metrics.f1);
  }
  report.micro = metrics(report.micro_counts);
  report.macro = {mean_defined(acc), mean_defined(prec), mean_defined(rec), mean_defined(f1)};
}

EvaluationReport evaluate_prepared(const std::string& method, const Extractor& extract,
                                   const PreparedCorpus& prepared, std::size_t jobs) {
  EvaluationReport report;
  report.method = method;
  report.skipped = prepared.skipped;
  if (auto it = published_reference_rows().find(method); it != published_reference_rows().end()) {
    report.reference = it->second;
  }
  report.articles = parallel_map(prepared.articles, jobs, [&](const PreparedArticle& p) {
    Extraction x = extract(p.article);
    ArticleResult r;
    r.article_id = p.article.article_id;
    r.counts = confusion(x.graph, p.truth_graph);
    r.metrics = metrics(r.counts);
    r.predicted_edges = x.graph.edge_count();
    r.notices = std::move(x.notices);
    return r;
  });
  aggregate(report);
  return report;
}

EvaluationReport evaluate_corpus(const std::string& method, const Extractor& extract,
                                 std::span<const GroundTruthEntry> corpus,
                                 const ArticleSource& source, std::size_t jobs) {
  return evaluate_prepared(method, extract, prepare_corpus(corpus, source, jobs), jobs);
}

EvaluationReport evaluate_predictions(const std::string& method,
                                      std::span<const GroundTruthEntry> corpus,
                                      std::span<const GroundTruthEntry> predictions) {
  EvaluationReport report;
  report.method = method;
  if (auto it = published_reference_rows().find(method); it != published_reference_rows().end()) {
    report.reference = it->second;
  }
  std::map<std::string, const GroundTruthEntry*> by_id;
  for (const auto& p : predictions) by_id.emplace(p.article_id, &p);
  for (const auto& truth : corpus) {
    auto it = by_id.find(truth.article_id);
    if (it == by_id.end()) {
      report.skipped.push_back({truth.article_id, "no prediction"});
      continue;
    }
    ArticleResult r;
    r.article_id = truth.article_id;
    try {
      DerivationGraph pred = graph_from_entry(*it->second);
      r.counts = confusion(pred, graph_from_entry(truth));
      r.predicted_edges = pred.edge_count();
    } catch (const GraphError& e) {
      report.skipped.push_back({truth.article_id, e.what()});
      continue;
    }
    r.metrics = metrics(r.counts);
    report.articles.push_back(std::move(r));
  }
  aggregate(report);
  return report;
}

std::string EvaluationReport::to_csv() const {
  std::string out = "article_id,tp,fp,fn,tn,accuracy,precision,recall,f1\n";
  for (const auto& a : articles) {
    out += fmt::format("{},{},{},{},{},{}\n", csv_field(a.article_id), a.counts.tp, a.counts.fp,
                       a.counts.fn, a.counts.tn, metrics_csv(a.metrics));
  }
  out += fmt::format("micro,{},{},{},{},{}\n", micro_counts.tp, micro_counts.fp, micro_counts.fn,
                     micro_counts.tn, metrics_csv(micro));
  out += fmt::format("macro,,,,,{}\n", metrics_csv(macro));
  if (reference) out += fmt::format("reference,,,,,{}\n", reference_csv(*reference));
  return out;
}

std::string EvaluationReport::to_json() const {
  ordered_json j;
  j["method"] = method;
  ordered_json rows = ordered_json::array();
  for (const auto& a : articles) {
    ordered_json r;
    r["article_id"] = a.article_id;
    r["counts"] = counts_json(a.counts);
    r["metrics"] = metrics_json(a.metrics);
    r["predicted_edges"] = a.predicted_edges;
    r["notices"] = a.notices;
    rows.push_back(std::move(r));
  }
  j["articles"] = std::move(rows);
  ordered_json skipped_rows = ordered_json::array();
  for (const auto& s : skipped) skipped_rows.push_back({{"article_id", s.article_id}, {"reason", s.reason}});
  j["skipped"] = std::move(skipped_rows);
  j["micro"] = {{"counts", counts_json(micro_counts)}, {"metrics", metrics_json(micro)}};
  j["macro"] = metrics_json(macro);
  j["reference"] = reference ? reference_json(*reference) : ordered_json(nullptr);
  return j.dump(2) + "\n";
}

std::vector<SweepRow> sweep_token_similarity(const PreparedCorpus& prepared,
                                             std::span<const double> thresholds,
                                             std::span<const int> strictness,
                                             std::span<const Direction> directions,
                                             std::size_t jobs) {
  std::vector<TokenSimParams> grid;
  for (int s : strictness) {
    for (Direction d : directions) {
      for (double t : thresholds) {
        TokenSimParams p{s, d, t};
        p.validate();
        grid.push_back(p);
      }
    }
  }
  auto key = [](const TokenSimParams& p) {
    return std::make_tuple(p.strictness, static_cast<int>(p.direction), p.threshold);
  };
  std::sort(grid.begin(), grid.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [&](const auto& a, const auto& b) { return key(a) == key(b); }),
             grid.end());

  return parallel_map(grid, jobs, [&](const TokenSimParams& p) {
    SweepRow row;
    row.params = p;
    for (const auto& a : prepared.articles) {
      Extraction x = token_similarity_extract(a.article, p);
      row.counts += confusion(x.graph, a.truth_graph);
      row.predicted_edges += x.graph.edge_count();
    }
    row.metrics = metrics(row.counts);
    return row;
  });
}

std::string sweep_csv(std::span<const SweepRow> rows) {
  std::string out = "strictness,direction,threshold,tp,fp,fn,tn,accuracy,precision,recall,f1\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{:.6f},{},{},{},{},{}\n", r.params.strictness,
                       to_string(r.params.direction), r.params.threshold, r.counts.tp,
                       r.counts.fp, r.counts.fn, r.counts.tn, metrics_csv(r.metrics));
  }
  return out;
}

SeedReport evaluate_seed(std::span<const GroundTruthEntry> corpus, const SeedConfig& config,
                         const std::map<std::string, DerivationGraph>* graphs) {
  SeedReport report;
  report.reference = published_seed_reference();
  for (const auto& e : corpus) {
    if (!e.most_important) {
      report.skipped.push_back({e.article_id, "no labeled most important equation"});
      continue;
    }
    DerivationGraph g;
    if (graphs) {
      auto it = graphs->find(e.article_id);
      if (it == graphs->end()) {
        report.skipped.push_back({e.article_id, "no predicted graph"});
        continue;
      }
      g = it->second;
    } else {
      g = graph_from_entry(e);
    }
    SeedArticleResult r;
    r.article_id = e.article_id;
    r.most_important = *e.most_important;
    try {
      r.candidates = seed_candidates(g, config);
    } catch (const GraphError& err) {
      report.skipped.push_back({e.article_id, err.what()});
      continue;
    }
    r.hit = std::find(r.candidates.begin(), r.candidates.end(), r.most_important) !=
            r.candidates.end();
    r.counts.tp = r.hit ? 1 : 0;
    r.counts.fp = r.candidates.size() - r.counts.tp;
    r.counts.fn = 1 - r.counts.tp;
    report.micro_counts += r.counts;
    report.articles.push_back(std::move(r));
  }
  report.micro = metrics(report.micro_counts);
  return report;
}

std::string SeedReport::to_csv() const {
  std::string out =
      "article_id,most_important,candidates,hit,tp,fp,fn,accuracy,precision,recall,f1\n";
  for (const auto& a : articles) {
    out += fmt::format("{},{},{},{},{},{},{},{}\n", csv_field(a.article_id),
                       csv_field(a.most_important), csv_field(fmt::format("{}", fmt::join(a.candidates, ";"))),
                       a.hit ? 1 : 0, a.counts.tp, a.counts.fp, a.counts.fn,
                       metrics_csv(metrics(a.counts)));
  }
  out += fmt::format("micro,,,,{},{},{},{}\n", micro_counts.tp, micro_counts.fp, micro_counts.fn,
                     metrics_csv(micro));
  out += fmt::format("reference,,,,,,,{}\n", reference_csv(reference));
  return out;
}

std::string SeedReport::to_json() const {
  ordered_json j;
  ordered_json rows = ordered_json::array();
  for (const auto& a : articles) {
    rows.push_back({{"article_id", a.article_id},
                    {"most_important", a.most_important},
                    {"candidates", a.candidates},
                    {"hit", a.hit},
                    {"counts", counts_json(a.counts)}});
  }
  j["articles"] = std::move(rows);
  ordered_json skipped_rows = ordered_json::array();
  for (const auto& s : skipped) skipped_rows.push_back({{"article_id", s.article_id}, {"reason", s.reason}});
  j["skipped"] = std::move(skipped_rows);
  j["micro"] = {{"counts", counts_json(micro_counts)}, {"metrics", metrics_json(micro)}};
  j["reference"] = reference_json(reference);
  return j.dump(2) + "\n";
}

}  // namespace derivgraph
