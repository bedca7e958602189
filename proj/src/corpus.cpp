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

#include "derivgraph/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include <fmt/format.h>
#include <json.hpp>

namespace derivgraph {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string label_for(const json& record, std::size_t index) {
  auto it = record.find(kFieldArticleId);
  if (it != record.end() && it->is_string()) return it->get<std::string>();
  return fmt::format("<record {}>", index);
}

GroundTruthEntry entry_from_json(const json& record, std::size_t index,
                                 std::vector<Violation>& out) {
  GroundTruthEntry e;
  const std::string who = label_for(record, index);
  auto bad = [&](std::string_view field, std::string msg) {
    out.push_back({who, std::string(field), std::move(msg)});
  };
  if (!record.is_object()) {
    bad("<record>", "expected a JSON object");
    return e;
  }
  auto field = [&](std::string_view name) -> const json* {
    auto it = record.find(name);
    if (it == record.end()) {
      bad(name, "missing field");
      return nullptr;
    }
    return &*it;
  };

  if (const json* v = field(kFieldArticleId)) {
    if (v->is_string()) {
      e.article_id = v->get<std::string>();
    } else {
      bad(kFieldArticleId, "expected a string");
    }
  }
  if (const json* v = field(kFieldEquationIds)) {
    if (!v->is_array()) {
      bad(kFieldEquationIds, "expected an array of strings");
    } else {
      for (const auto& id : *v) {
        if (!id.is_string()) {
          bad(kFieldEquationIds, "non-string equation ID");
          continue;
        }
        e.equation_ids.push_back(id.get<std::string>());
      }
    }
  }
  if (const json* v = field(kFieldAdjacency)) {
    if (!v->is_object()) {
      bad(kFieldAdjacency, "expected an object");
    } else {
      for (const auto& [src, targets] : v->items()) {
        auto& list = e.adjacency[src];
        if (!targets.is_array()) {
          bad(kFieldAdjacency, fmt::format("targets of {} are not an array", src));
          continue;
        }
        for (const auto& t : targets) {
          if (t.is_null()) continue;
          if (!t.is_string()) {
            bad(kFieldAdjacency, fmt::format("non-string target under {}", src));
            continue;
          }
          list.push_back(t.get<std::string>());
        }
      }
    }
  }
  if (const json* v = field(kFieldEquationNumbers)) {
    if (!v->is_object()) {
      bad(kFieldEquationNumbers, "expected an object");
    } else {
      for (const auto& [id, num] : v->items()) {
        if (num.is_string()) {
          e.equation_numbers[id] = num.get<std::string>();
        } else if (num.is_number_integer()) {
          e.equation_numbers[id] = std::to_string(num.get<long long>());
        } else {
          bad(kFieldEquationNumbers, fmt::format("number of {} is not a string", id));
        }
      }
    }
  }
  // Optional: records without equations have nothing to name, and save()
  // omits the field when it is unset.
  if (auto it = record.find(kFieldMostImportant); it != record.end()) {
    const json* v = &*it;
    if (v->is_string()) {
      e.most_important = v->get<std::string>();
    } else if (!v->is_null()) {
      bad(kFieldMostImportant, "expected a string or null");
    }
  }
  return e;
}

ordered_json entry_to_json(const GroundTruthEntry& e) {
  ordered_json j;
  j[std::string(kFieldArticleId)] = e.article_id;
  j[std::string(kFieldEquationIds)] = e.equation_ids;

  ordered_json adj = ordered_json::object();
  auto emit = [&](const std::string& id) {
    auto it = e.adjacency.find(id);
    ordered_json targets = ordered_json::array();
    if (it == e.adjacency.end() || it->second.empty()) {
      targets.push_back(nullptr);
    } else {
      for (const auto& t : it->second) targets.push_back(t);
    }
    adj[id] = std::move(targets);
  };
  std::set<std::string> seen;
  for (const auto& id : e.equation_ids) {
    if (seen.insert(id).second && e.adjacency.count(id)) emit(id);
  }
  for (const auto& [id, _] : e.adjacency) {
    if (!seen.count(id)) emit(id);
  }
  j[std::string(kFieldAdjacency)] = std::move(adj);

  ordered_json nums = ordered_json::object();
  seen.clear();
  for (const auto& id : e.equation_ids) {
    auto it = e.equation_numbers.find(id);
    if (seen.insert(id).second && it != e.equation_numbers.end())
      nums[id] = it->second;
  }
  for (const auto& [id, n] : e.equation_numbers) {
    if (!seen.count(id)) nums[id] = n;
  }
  j[std::string(kFieldEquationNumbers)] = std::move(nums);

  if (e.most_important) {
    j[std::string(kFieldMostImportant)] = *e.most_important;
  } else {
    j[std::string(kFieldMostImportant)] = nullptr;
  }
  return j;
}

// Colour-marking DFS; returns the first cycle found as a closed path.
std::vector<std::string> find_cycle(const GroundTruthEntry& e) {
  enum Colour { white, grey, black };
  std::unordered_map<std::string, Colour> colour;
  for (const auto& id : e.equation_ids) colour[id] = white;
  std::vector<std::string> path;
  std::vector<std::string> cycle;

  auto visit = [&](auto&& self, const std::string& u) -> bool {
    colour[u] = grey;
    path.push_back(u);
    if (auto it = e.adjacency.find(u); it != e.adjacency.end()) {
      for (const auto& v : it->second) {
        auto c = colour.find(v);
        if (c == colour.end()) continue;  // unknown target, reported elsewhere
        if (c->second == grey) {
          auto from = std::find(path.begin(), path.end(), v);
          cycle.assign(from, path.end());
          cycle.push_back(v);
          return true;
        }
        if (c->second == white && self(self, v)) return true;
      }
    }
    path.pop_back();
    colour[u] = black;
    return false;
  };
  for (const auto& id : e.equation_ids) {
    if (colour[id] == white && visit(visit, id)) return cycle;
  }
  return {};
}

std::vector<GroundTruthEntry> records_from_text(std::string_view text,
                                                std::vector<Violation>& out) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(fmt::format("malformed corpus JSON at byte {}: {}", e.byte,
                                 e.what()),
                     e.byte);
  }
  std::vector<GroundTruthEntry> entries;
  if (doc.is_array()) {
    for (std::size_t i = 0; i < doc.size(); ++i)
      entries.push_back(entry_from_json(doc[i], i, out));
  } else {
    entries.push_back(entry_from_json(doc, 0, out));
  }
  return entries;
}

std::string join_violations(const std::vector<Violation>& vs) {
  std::string msg = fmt::format("{} corpus violation(s):", vs.size());
  for (const auto& v : vs) {
    msg += "\n  ";
    msg += v.to_string();
  }
  return msg;
}

}  // namespace

std::string Violation::to_string() const {
  return fmt::format("[{}] {}: {}", article_id, field, message);
}

CorpusError::CorpusError(std::vector<Violation> violations)
    : Error(join_violations(violations)), violations_(std::move(violations)) {}

std::vector<Violation> validate_entry(const GroundTruthEntry& e) {
  std::vector<Violation> out;
  auto bad = [&](std::string_view field, std::string msg) {
    out.push_back({e.article_id, std::string(field), std::move(msg)});
  };

  std::set<std::string> ids;
  for (const auto& id : e.equation_ids) {
    if (!ids.insert(id).second) bad(kFieldEquationIds, fmt::format("duplicate equation ID {}", id));
  }
  for (const auto& [src, targets] : e.adjacency) {
    if (!ids.count(src)) bad(kFieldAdjacency, fmt::format("key {} is not a listed equation", src));
    for (const auto& t : targets) {
      if (!ids.count(t)) bad(kFieldAdjacency, fmt::format("target {} of {} is not a listed equation", t, src));
    }
  }
  for (const auto& [id, _] : e.equation_numbers) {
    if (!ids.count(id)) bad(kFieldEquationNumbers, fmt::format("key {} is not a listed equation", id));
  }
  for (const auto& id : ids) {
    if (!e.adjacency.count(id)) bad(kFieldAdjacency, fmt::format("no entry for equation {}", id));
    if (!e.equation_numbers.count(id)) bad(kFieldEquationNumbers, fmt::format("no entry for equation {}", id));
  }
  if (auto cycle = find_cycle(e); !cycle.empty()) {
    std::string path;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      if (i) path += " -> ";
      path += cycle[i];
    }
    bad(kFieldAdjacency, fmt::format("cycle {}", path));
  }
  if (e.most_important) {
    if (!ids.count(*e.most_important))
      bad(kFieldMostImportant, fmt::format("{} is not a listed equation", *e.most_important));
  } else if (!ids.empty()) {
    bad(kFieldMostImportant, "missing for an article with equations");
  }
  return out;
}

std::vector<GroundTruthEntry> parse_corpus_unchecked(std::string_view text) {
  std::vector<Violation> violations;
  auto entries = records_from_text(text, violations);
  if (!violations.empty()) throw CorpusError(std::move(violations));
  return entries;
}

std::vector<GroundTruthEntry> parse_corpus(std::string_view text) {
  std::vector<Violation> violations;
  auto entries = records_from_text(text, violations);
  for (const auto& e : entries) {
    auto v = validate_entry(e);
    violations.insert(violations.end(), v.begin(), v.end());
  }
  if (!violations.empty()) throw CorpusError(std::move(violations));
  return entries;
}

std::vector<GroundTruthEntry> load_corpus(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(path, ec)) return parse_corpus(read_file(path));

  std::vector<fs::path> files;
  for (const auto& f : fs::directory_iterator(path)) {
    if (f.is_regular_file() && f.path().extension() == ".json")
      files.push_back(f.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<GroundTruthEntry> all;
  std::vector<Violation> violations;
  for (const auto& f : files) {
    std::vector<Violation> local;
    std::vector<GroundTruthEntry> entries;
    try {
      entries = records_from_text(read_file(f), local);
    } catch (const ParseError& e) {
      throw ParseError(fmt::format("{}: {}", f.string(), e.what()), e.offset());
    }
    violations.insert(violations.end(), local.begin(), local.end());
    for (auto& e : entries) {
      auto v = validate_entry(e);
      violations.insert(violations.end(), v.begin(), v.end());
      all.push_back(std::move(e));
    }
  }
  if (!violations.empty()) throw CorpusError(std::move(violations));
  return all;
}

std::string dump_corpus(std::span<const GroundTruthEntry> entries) {
  ordered_json arr = ordered_json::array();
  for (const auto& e : entries) arr.push_back(entry_to_json(e));
  return arr.dump(4) + "\n";
}

void save_corpus(std::span<const GroundTruthEntry> entries,
                 const std::filesystem::path& path) {
  write_file(path, dump_corpus(entries));
}

CorpusStats corpus_stats(std::span<const GroundTruthEntry> entries) {
  CorpusStats s;
  s.articles = entries.size();
  if (entries.empty()) return s;
  s.min_equations = entries.front().equation_ids.size();
  std::size_t total = 0;
  for (const auto& e : entries) {
    const std::size_t n = e.equation_ids.size();
    s.min_equations = std::min(s.min_equations, n);
    s.max_equations = std::max(s.max_equations, n);
    total += n;
    for (const auto& [_, t] : e.adjacency) s.edges += t.size();
  }
  s.mean_equations = static_cast<double>(total) / static_cast<double>(entries.size());
  return s;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot read {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError(fmt::format("error reading {}", path.string()));
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError(fmt::format("error writing {}", path.string()));
}

}  // namespace derivgraph
