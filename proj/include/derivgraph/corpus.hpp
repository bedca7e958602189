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

// Ground-truth corpus: hand-labeled derivation graphs, one record per
// article, in the published JSON layout:
//
//   {
//       "Article ID": "1409.0466",
//       "Equation ID": ["S3.E1", ...],
//       "Adjacency List": {"S3.E1": ["S3.E3", "S3.E5"], "S3.E3": [null], ...},
//       "Equation Number": {"S3.E1": "1", ...},
//       "Most Important Equation": "S3.E5"
//   }
//
// Sinks carry a single null in the file; in memory their list is empty.

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "derivgraph/error.hpp"

namespace derivgraph {

inline constexpr std::string_view kFieldArticleId = "Article ID";
inline constexpr std::string_view kFieldEquationIds = "Equation ID";
inline constexpr std::string_view kFieldAdjacency = "Adjacency List";
inline constexpr std::string_view kFieldEquationNumbers = "Equation Number";
inline constexpr std::string_view kFieldMostImportant = "Most Important Equation";

struct GroundTruthEntry {
  std::string article_id;
  std::vector<std::string> equation_ids;  // document order
  std::map<std::string, std::vector<std::string>> adjacency;
  std::map<std::string, std::string> equation_numbers;
  // Absent only for an entry without equations.
  std::optional<std::string> most_important;

  bool operator==(const GroundTruthEntry&) const = default;
};

struct Violation {
  std::string article_id;
  std::string field;
  std::string message;

  std::string to_string() const;
};

/// Every invariant breach of `entry`; empty means valid.
std::vector<Violation> validate_entry(const GroundTruthEntry& entry);

class CorpusError : public Error {
 public:
  explicit CorpusError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// Parse corpus JSON text (a single record or an array of records).
/// Malformed JSON throws ParseError; schema or invariant violations throw
/// CorpusError listing all of them.
std::vector<GroundTruthEntry> parse_corpus(std::string_view json_text);

/// Like parse_corpus but only checks the schema, not the graph invariants.
std::vector<GroundTruthEntry> parse_corpus_unchecked(std::string_view json_text);

/// Load a corpus file, or every *.json file (name order) in a directory.
std::vector<GroundTruthEntry> load_corpus(const std::filesystem::path& path);

/// Canonical JSON text: an array of records, 4-space indent, trailing newline.
std::string dump_corpus(std::span<const GroundTruthEntry> entries);

void save_corpus(std::span<const GroundTruthEntry> entries,
                 const std::filesystem::path& path);

struct CorpusStats {
  std::size_t articles = 0;
  std::size_t min_equations = 0;
  std::size_t max_equations = 0;
  double mean_equations = 0.0;
  std::size_t edges = 0;
};

CorpusStats corpus_stats(std::span<const GroundTruthEntry> entries);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace derivgraph
