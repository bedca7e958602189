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

// derivgraph: extract and score equation derivation graphs.
//
// Exit status: 0 success, 1 validation or scoring findings (invalid corpus
// entries, skipped articles), 2 usage or I/O errors.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "derivgraph/analytic.hpp"
#include "derivgraph/bayes.hpp"
#include "derivgraph/corpus.hpp"
#include "derivgraph/eval.hpp"
#include "derivgraph/graph.hpp"
#include "derivgraph/ingest.hpp"
#include "derivgraph/llm.hpp"
#include "derivgraph/parallel.hpp"
#include "derivgraph/pipeline.hpp"
#include "derivgraph/seed.hpp"

namespace fs = std::filesystem;
using namespace derivgraph;

namespace {

constexpr int kOk = 0;
constexpr int kFindings = 1;
constexpr int kUsage = 2;

struct Options {
  std::string corpus;
  std::string articles;
  std::string method = "brute-force";
  std::optional<double> threshold;
  int strictness = 2;
  std::string direction = "greater";
  std::string lcs_denominator = "shorter";
  double train_split = 0.9;
  std::uint64_t seed = 0;
  int retries = 2;
  std::string llm_endpoint;
  std::string mock_llm;
  std::string model;
  std::string predictions;
  std::string out;
  std::size_t jobs = 1;
  bool dot = false;
  std::vector<std::string> article_filter;
  // sweep grid
  std::vector<double> sweep_thresholds;
  std::vector<int> sweep_strictness;
  std::vector<std::string> sweep_directions;
  // parse
  std::string html;
  std::string article_id;
};

RunConfig to_run_config(const Options& o) {
  RunConfig c;
  c.corpus = o.corpus;
  c.articles = o.articles;
  c.method = parse_method(o.method);
  c.threshold = o.threshold;
  c.strictness = o.strictness;
  c.direction = parse_direction(o.direction);
  if (o.lcs_denominator == "shorter") {
    c.lcs_denominator = LcsDenominator::shorter;
  } else if (o.lcs_denominator == "longer") {
    c.lcs_denominator = LcsDenominator::longer;
  } else {
    throw UsageError(fmt::format("--lcs-denominator must be shorter or longer, got '{}'",
                                 o.lcs_denominator));
  }
  c.train_split = o.train_split;
  c.seed = o.seed;
  c.retries = o.retries;
  if (!o.mock_llm.empty()) c.mock_llm = o.mock_llm;
  if (!o.llm_endpoint.empty()) c.llm_endpoint = o.llm_endpoint;
  if (!o.model.empty()) c.model_path = o.model;
  if (!o.out.empty()) c.out = o.out;
  c.jobs = o.jobs;
  c.dot = o.dot;
  c.validate();
  return c;
}

void add_method_options(CLI::App* cmd, Options& o) {
  const auto names = method_names();
  cmd->add_option("--method", o.method, "Extraction method")
      ->check(CLI::IsMember(std::vector<std::string>(names.begin(), names.end())));
  cmd->add_option("--threshold", o.threshold, "Similarity threshold");
  cmd->add_option("--strictness", o.strictness, "Token-similarity strictness (0, 1, 2)");
  cmd->add_option("--direction", o.direction, "Token-similarity direction (greater, lesser)");
  cmd->add_option("--lcs-denominator", o.lcs_denominator,
                  "Common-substring ratio denominator (shorter, longer)");
  cmd->add_option("--train-split", o.train_split, "Naive Bayes training share of articles");
  cmd->add_option("--seed", o.seed, "Random seed for the train/test split");
  cmd->add_option("--model", o.model, "Trained Naive Bayes model (JSON)");
  cmd->add_option("--llm-endpoint", o.llm_endpoint, "Chat-completion endpoint URL")
      ->envname("DERIVGRAPH_LLM_ENDPOINT");
  cmd->add_option("--mock-llm", o.mock_llm, "Recorded LLM replies (JSON) instead of a live endpoint");
  cmd->add_option("--retries", o.retries, "LLM re-requests on malformed replies");
  cmd->add_option("--jobs", o.jobs, "Articles processed concurrently");
}

std::vector<GroundTruthEntry> load_checked(const std::string& path) {
  if (path.empty()) throw UsageError("--corpus is required");
  return load_corpus(path);
}

void write_output(const fs::path& path, const std::string& text) {
  write_file(path, text);
  fmt::print(stderr, "wrote {}\n", path.string());
}

std::map<std::string, std::string> number_labels(const ParsedArticle& a) {
  std::map<std::string, std::string> out;
  for (const auto& e : a.equations) out.emplace(e.eq_id, e.number_label);
  return out;
}

std::optional<std::string> predicted_seed(const DerivationGraph& g) {
  if (g.size() == 0) return std::nullopt;
  return most_important(seed_bfs(g));
}

bool selected(const Options& o, const std::string& id) {
  return o.article_filter.empty() ||
         std::find(o.article_filter.begin(), o.article_filter.end(), id) != o.article_filter.end();
}

// Articles for extract/eval: ground-truth restricted when a corpus is
// given, otherwise every *.html file in the articles directory.
PreparedCorpus prepare(const Options& o, const RunConfig& c,
                       std::vector<GroundTruthEntry>& corpus_storage) {
  if (o.articles.empty()) throw UsageError("--articles is required");
  if (!o.corpus.empty()) {
    corpus_storage = load_checked(o.corpus);
    std::vector<GroundTruthEntry> kept;
    for (auto& e : corpus_storage) {
      if (selected(o, e.article_id)) kept.push_back(e);
    }
    corpus_storage = std::move(kept);
    return prepare_corpus(corpus_storage, DirectorySource(o.articles), c.jobs);
  }
  if (!fs::is_directory(o.articles)) {
    throw IoError(fmt::format("articles directory {} does not exist", o.articles));
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(o.articles)) {
    if (entry.is_regular_file() && entry.path().extension() == ".html") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  PreparedCorpus out;
  for (const auto& f : files) {
    const std::string id = f.stem().string();
    if (!selected(o, id)) continue;
    try {
      ParsedArticle a = parse_article(read_file(f), id);
      DerivationGraph empty(a.equation_ids());
      out.articles.push_back({std::move(a), nullptr, std::move(empty)});
    } catch (const ParseError& e) {
      out.skipped.push_back({id, fmt::format("unreadable HTML: {}", e.what())});
    }
  }
  return out;
}

struct MethodSetup {
  Extractor extract;
  PreparedCorpus targets;  // articles the extractor is applied to
  std::optional<NBModel> model;
};

MethodSetup setup_method(const Options& o, const RunConfig& c, PreparedCorpus prepared) {
  MethodSetup s;
  if (c.method == Method::naive_bayes) {
    if (c.model_path) {
      s.model = NBModel::from_json(read_file(*c.model_path));
      s.targets = std::move(prepared);
    } else {
      if (o.corpus.empty()) throw UsageError("naive-bayes training needs --corpus (or pass --model)");
      TrainedSplit t = train_on_split(prepared, c.train_split, c.seed);
      fmt::print(stderr, "naive-bayes: trained on {} articles, testing on {}\n", t.split.train.size(),
                 t.split.test.size());
      s.model = std::move(t.model);
      s.targets = select_articles(prepared, t.split.test);
    }
    s.extract = make_extractor(c, &*s.model);
  } else if (c.method == Method::llm) {
    s.extract = make_extractor(c, nullptr, make_transport_factory(c));
    s.targets = std::move(prepared);
  } else {
    s.extract = make_extractor(c);
    s.targets = std::move(prepared);
  }
  return s;
}

void print_skipped(const std::vector<SkippedArticle>& skipped) {
  for (const auto& s : skipped) fmt::print(stderr, "skipped {}: {}\n", s.article_id, s.reason);
}

void print_metrics(std::string_view label, const MetricsReport& m) {
  fmt::print("{} accuracy={} precision={} recall={} f1={}\n", label, format_metric(m.accuracy),
             format_metric(m.precision), format_metric(m.recall), format_metric(m.f1));
}

int cmd_validate(const Options& o) {
  if (o.corpus.empty()) throw UsageError("--corpus is required");
  std::vector<GroundTruthEntry> entries;
  if (fs::is_directory(o.corpus)) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(o.corpus)) {
      if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      auto part = parse_corpus_unchecked(read_file(f));
      entries.insert(entries.end(), part.begin(), part.end());
    }
  } else {
    entries = parse_corpus_unchecked(read_file(o.corpus));
  }
  std::size_t bad = 0;
  for (const auto& e : entries) {
    auto violations = validate_entry(e);
    if (!violations.empty()) ++bad;
    for (const auto& v : violations) fmt::print("{}\n", v.to_string());
  }
  fmt::print("{} entries, {} invalid\n", entries.size(), bad);
  return bad == 0 ? kOk : kFindings;
}

int cmd_stats(const Options& o) {
  auto corpus = load_checked(o.corpus);
  CorpusStats s = corpus_stats(corpus);
  fmt::print("articles={} equations_min={} equations_max={} equations_mean={:.6f} edges={}\n",
             s.articles, s.min_equations, s.max_equations, s.mean_equations, s.edges);
  return kOk;
}

int cmd_parse(const Options& o) {
  const fs::path path = o.html;
  const std::string id = o.article_id.empty() ? path.stem().string() : o.article_id;
  ParsedArticle a = parse_article(read_file(path), id);
  nlohmann::ordered_json j;
  j["article_id"] = a.article_id;
  nlohmann::ordered_json eqs = nlohmann::ordered_json::array();
  for (const auto& e : a.equations) {
    const TextSegment& seg = a.segments.at(e.eq_id);
    eqs.push_back({{"eq_id", e.eq_id},
                   {"number", e.number_label},
                   {"alttext", e.alttext},
                   {"position", e.position},
                   {"paragraph_before", a.slice(seg.paragraph_before)},
                   {"containing_sentence", a.slice(seg.containing_sentence)},
                   {"sentence_after", a.slice(seg.sentence_after)}});
  }
  j["equations"] = std::move(eqs);
  j["text"] = a.text;
  const std::string text = j.dump(2) + "\n";
  if (o.out.empty()) {
    fmt::print("{}", text);
  } else {
    write_output(o.out, text);
  }
  return kOk;
}

int cmd_extract(const Options& o) {
  const RunConfig c = to_run_config(o);
  std::vector<GroundTruthEntry> corpus;
  MethodSetup s = setup_method(o, c, prepare(o, c, corpus));
  if (s.model && !c.model_path) write_output(c.out / "model.json", s.model->to_json());

  auto results = parallel_map(s.targets.articles, c.jobs, [&](const PreparedArticle& p) {
    return s.extract(p.article);
  });
  for (std::size_t i = 0; i < results.size(); ++i) {
    const ParsedArticle& a = s.targets.articles[i].article;
    const Extraction& x = results[i];
    for (const auto& n : x.notices) fmt::print(stderr, "{}: {}\n", a.article_id, n);
    GroundTruthEntry entry =
        entry_from_graph(x.graph, a.article_id, number_labels(a), predicted_seed(x.graph));
    write_output(c.out / (a.article_id + ".json"), dump_corpus(std::span(&entry, 1)));
    if (c.dot) write_output(c.out / (a.article_id + ".dot"), to_dot(x.graph, number_labels(a), a.article_id));
    fmt::print("{} {} edges\n", a.article_id, x.graph.edge_count());
  }
  print_skipped(s.targets.skipped);
  return s.targets.skipped.empty() ? kOk : kFindings;
}

int cmd_eval(const Options& o) {
  EvaluationReport report;
  std::string out_dir = o.out;
  if (!o.predictions.empty()) {
    auto corpus = load_checked(o.corpus);
    auto predictions = load_corpus(o.predictions);
    std::vector<GroundTruthEntry> kept;
    for (auto& e : corpus) {
      if (selected(o, e.article_id)) kept.push_back(e);
    }
    report = evaluate_predictions(o.method, kept, predictions);
  } else {
    if (o.corpus.empty()) throw UsageError("--corpus is required");
    const RunConfig c = to_run_config(o);
    std::vector<GroundTruthEntry> corpus;
    MethodSetup s = setup_method(o, c, prepare(o, c, corpus));
    report = evaluate_prepared(std::string(method_name(c.method)), s.extract, s.targets, c.jobs);
    out_dir = c.out.string();
  }
  for (const auto& a : report.articles) {
    for (const auto& n : a.notices) fmt::print(stderr, "{}: {}\n", a.article_id, n);
  }
  fs::path dir = out_dir.empty() ? fs::path("out") : fs::path(out_dir);
  write_output(dir / "report.csv", report.to_csv());
  write_output(dir / "report.json", report.to_json());
  fmt::print("{} articles, {} skipped\n", report.articles.size(), report.skipped.size());
  print_metrics("micro", report.micro);
  print_metrics("macro", report.macro);
  print_skipped(report.skipped);
  return report.skipped.empty() ? kOk : kFindings;
}

int cmd_sweep(const Options& o) {
  if (o.corpus.empty()) throw UsageError("--corpus is required");
  Options base = o;
  base.method = "token-similarity";
  const RunConfig c = to_run_config(base);
  std::vector<GroundTruthEntry> corpus;
  PreparedCorpus prepared = prepare(o, c, corpus);

  std::vector<double> thresholds = o.sweep_thresholds;
  if (thresholds.empty()) {
    for (int k = 0; k <= 20; ++k) thresholds.push_back(k * 0.05);
  }
  std::vector<int> strictness = o.sweep_strictness;
  if (strictness.empty()) strictness = {0, 1, 2};
  std::vector<Direction> directions;
  for (const auto& d : o.sweep_directions) directions.push_back(parse_direction(d));
  if (directions.empty()) directions = {Direction::greater, Direction::lesser};

  auto rows = sweep_token_similarity(prepared, thresholds, strictness, directions, c.jobs);
  const std::string csv = sweep_csv(rows);
  write_output(c.out / "sweep.csv", csv);
  fmt::print("{}", csv);
  print_skipped(prepared.skipped);
  return prepared.skipped.empty() ? kOk : kFindings;
}

void print_seed_details(const GroundTruthEntry& e, const DerivationGraph& g) {
  const WeightMap bfs = seed_bfs(g);
  const WeightMap dfs = seed_dfs(g);
  fmt::print("article {}\n", e.article_id);
  fmt::print("node,number,bfs_weight,bfs_likelihood,dfs_weight,dfs_likelihood\n");
  const auto lb = likelihoods(bfs);
  const auto ld = likelihoods(dfs);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const std::string& id = g.nodes()[i];
    auto num = e.equation_numbers.find(id);
    fmt::print("{},{},{:.6f},{:.6f},{:.6f},{:.6f}\n", id,
               num == e.equation_numbers.end() ? "" : num->second, bfs.weights[i], lb[i],
               dfs.weights[i], ld[i]);
  }
  fmt::print("most_important_bfs {} {:.6f}\n", most_important(bfs), bfs.weights[argmax_weight(bfs)]);
  fmt::print("most_important_dfs {} {:.6f}\n", most_important(dfs), dfs.weights[argmax_weight(dfs)]);
  fmt::print("candidates {}\n", fmt::join(seed_candidates(g), " "));
  if (e.most_important) fmt::print("labeled {}\n", *e.most_important);
}

int cmd_seed(const Options& o) {
  auto corpus = load_checked(o.corpus);
  std::vector<GroundTruthEntry> kept;
  for (auto& e : corpus) {
    if (selected(o, e.article_id)) kept.push_back(e);
  }
  std::map<std::string, DerivationGraph> graphs;
  std::map<std::string, DerivationGraph>* use = nullptr;
  std::map<std::string, GroundTruthEntry> predicted_entries;
  if (!o.predictions.empty()) {
    for (auto& p : load_corpus(o.predictions)) {
      graphs.emplace(p.article_id, graph_from_entry(p));
      predicted_entries.emplace(p.article_id, p);
    }
    use = &graphs;
  }
  for (const auto& e : kept) {
    if (e.equation_ids.empty()) continue;
    if (use) {
      auto it = graphs.find(e.article_id);
      if (it == graphs.end()) continue;
      GroundTruthEntry shown = predicted_entries.at(e.article_id);
      shown.most_important = e.most_important;
      print_seed_details(shown, it->second);
    } else {
      print_seed_details(e, graph_from_entry(e));
    }
    if (o.dot && !o.out.empty()) {
      const DerivationGraph g = use ? graphs.at(e.article_id) : graph_from_entry(e);
      const WeightMap w = seed_bfs(g);
      std::map<std::string, std::string> labels;
      for (std::size_t i = 0; i < g.size(); ++i) {
        labels[g.nodes()[i]] = fmt::format("{}\n({:.2f})", g.nodes()[i], w.weights[i]);
      }
      write_output(fs::path(o.out) / (e.article_id + ".seed.dot"), to_dot(g, labels, e.article_id));
    }
  }
  SeedReport report = evaluate_seed(kept, {}, use);
  if (!o.out.empty()) {
    write_output(fs::path(o.out) / "seed.csv", report.to_csv());
    write_output(fs::path(o.out) / "seed.json", report.to_json());
  }
  fmt::print("{} articles, {} hits\n", report.articles.size(), report.micro_counts.tp);
  print_metrics("seed", report.micro);
  print_skipped(report.skipped);
  return report.skipped.empty() ? kOk : kFindings;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extract and score equation derivation graphs"};
  app.require_subcommand(1);
  Options o;

  auto* validate = app.add_subcommand("validate", "Check corpus invariants");
  validate->add_option("--corpus", o.corpus, "Corpus JSON file or directory")->required();

  auto* stats = app.add_subcommand("stats", "Corpus summary");
  stats->add_option("--corpus", o.corpus, "Corpus JSON file or directory")->required();

  auto* parse = app.add_subcommand("parse", "Dump the equations and text windows of one article");
  parse->add_option("html", o.html, "Article HTML")->required();
  parse->add_option("--article-id", o.article_id, "Article ID (default: file stem)");
  parse->add_option("--out", o.out, "Write JSON here instead of stdout");

  auto* extract = app.add_subcommand("extract", "Predict derivation graphs");
  extract->add_option("--corpus", o.corpus, "Ground truth (restricts nodes; required for naive-bayes training)");
  extract->add_option("--articles", o.articles, "Directory of <article id>.html")->required();
  extract->add_option("--out", o.out, "Output directory")->required();
  extract->add_flag("--dot", o.dot, "Also write Graphviz files");
  extract->add_option("--article", o.article_filter, "Only these article IDs");
  add_method_options(extract, o);

  auto* eval = app.add_subcommand("eval", "Score a method or stored predictions");
  eval->add_option("--corpus", o.corpus, "Ground truth")->required();
  eval->add_option("--articles", o.articles, "Directory of <article id>.html");
  eval->add_option("--predictions", o.predictions, "Stored predictions (file or directory)");
  eval->add_option("--out", o.out, "Output directory");
  eval->add_option("--article", o.article_filter, "Only these article IDs");
  add_method_options(eval, o);

  auto* sweep = app.add_subcommand("sweep", "Token-similarity parameter grid");
  sweep->add_option("--corpus", o.corpus, "Ground truth")->required();
  sweep->add_option("--articles", o.articles, "Directory of <article id>.html")->required();
  sweep->add_option("--out", o.out, "Output directory");
  sweep->add_option("--threshold", o.sweep_thresholds, "Thresholds (default 0, 0.05, ..., 1)");
  sweep->add_option("--strictness", o.sweep_strictness, "Strictness values (default 0 1 2)");
  sweep->add_option("--direction", o.sweep_directions, "Directions (default greater lesser)");
  sweep->add_option("--jobs", o.jobs, "Parameter settings evaluated concurrently");

  auto* seed = app.add_subcommand("seed", "Most important equation by weight propagation");
  seed->add_option("--corpus", o.corpus, "Ground truth")->required();
  seed->add_option("--predictions", o.predictions, "Use predicted graphs instead of the truth graphs");
  seed->add_option("--article", o.article_filter, "Only these article IDs");
  seed->add_option("--out", o.out, "Output directory");
  seed->add_flag("--dot", o.dot, "Write weight-annotated Graphviz files (needs --out)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*validate) return cmd_validate(o);
    if (*stats) return cmd_stats(o);
    if (*parse) return cmd_parse(o);
    if (*extract) return cmd_extract(o);
    if (*eval) return cmd_eval(o);
    if (*sweep) return cmd_sweep(o);
    if (*seed) return cmd_seed(o);
  } catch (const CorpusError& e) {
    for (const auto& v : e.violations()) fmt::print(stderr, "{}\n", v.to_string());
    fmt::print(stderr, "error: invalid corpus\n");
    return kUsage;
  } catch (const UsageError& e) {
    fmt::print(stderr, "usage error: {}\n", e.what());
    return kUsage;
  } catch (const Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kUsage;
  }
  return kUsage;
}
