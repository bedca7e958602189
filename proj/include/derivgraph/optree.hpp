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

// Operator trees built from presentation MathML.

#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace derivgraph {

struct OpTree {
  enum class Kind { operator_, identifier, number, group };

  Kind kind = Kind::group;
  std::string symbol;
  std::vector<OpTree> children;

  static OpTree leaf(Kind kind, std::string symbol) { return {kind, std::move(symbol), {}}; }
  static OpTree node(Kind kind, std::string symbol, std::vector<OpTree> children) {
    return {kind, std::move(symbol), std::move(children)};
  }

  std::size_t size() const;  // number of subtrees (= nodes)
  bool operator==(const OpTree&) const = default;
};

/// Throws ParseError on malformed markup.
///   mi, mtext -> identifier   mo -> operator   mn -> number
///   mrow, math -> group       msub "_", msup "^", mfrac "/", msqrt "√"
/// annotation elements are dropped, semantics is unwrapped, anything else
/// becomes a group named after the element.
OpTree build_optree(std::string_view mathml);

/// Canonical string of a subtree's shape and symbols.
std::string fingerprint(const OpTree& t);

/// Fingerprint multiplicities over every subtree of `t`.
std::map<std::string, std::size_t> subtree_fingerprints(const OpTree& t);

/// Shared subtree fingerprints (with multiplicity) over the smaller tree's
/// subtree count. Symmetric, 1 for identical trees.
double subtree_similarity(const OpTree& a, const OpTree& b);

}  // namespace derivgraph
