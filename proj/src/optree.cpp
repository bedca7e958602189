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

#include "derivgraph/optree.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "derivgraph/markup.hpp"

namespace derivgraph {

namespace {

using markup::Node;
using Kind = OpTree::Kind;

std::string trimmed_text(const Node& n) {
  std::string s = markup::text_content(n);
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool is_blank(const Node& n) {
  return n.is_text() && n.text.find_first_not_of(" \t\r\n") == std::string::npos;
}

bool is_annotation(const Node& n) {
  return n.is("annotation") || n.is("annotation-xml");
}

std::vector<OpTree> convert_children(const Node& n);

OpTree convert(const Node& n) {
  if (n.is_text()) return OpTree::leaf(Kind::identifier, trimmed_text(n));
  if (n.is("mi") || n.is("mtext")) return OpTree::leaf(Kind::identifier, trimmed_text(n));
  if (n.is("mo")) return OpTree::leaf(Kind::operator_, trimmed_text(n));
  if (n.is("mn")) return OpTree::leaf(Kind::number, trimmed_text(n));
  if (n.is("semantics")) {
    auto kids = convert_children(n);
    if (kids.size() == 1) return std::move(kids.front());
    return OpTree::node(Kind::group, "", std::move(kids));
  }
  if (n.is("mrow") || n.is("math")) {
    return OpTree::node(Kind::group, "", convert_children(n));
  }
  if (n.is("msub")) return OpTree::node(Kind::operator_, "_", convert_children(n));
  if (n.is("msup")) return OpTree::node(Kind::operator_, "^", convert_children(n));
  if (n.is("mfrac")) return OpTree::node(Kind::operator_, "/", convert_children(n));
  if (n.is("msqrt")) {
    auto kids = convert_children(n);
    if (kids.size() > 1) {
      std::vector<OpTree> one;
      one.push_back(OpTree::node(Kind::group, "", std::move(kids)));
      kids = std::move(one);
    }
    return OpTree::node(Kind::operator_, "√", std::move(kids));
  }
  return OpTree::node(Kind::group, n.name, convert_children(n));
}

std::vector<OpTree> convert_children(const Node& n) {
  std::vector<OpTree> out;
  for (const auto& c : n.children) {
    if (is_blank(c) || is_annotation(c)) continue;
    out.push_back(convert(c));
  }
  return out;
}

char kind_code(Kind k) {
  switch (k) {
    case Kind::operator_: return 'o';
    case Kind::identifier: return 'i';
    case Kind::number: return 'n';
    case Kind::group: return 'g';
  }
  return '?';
}

std::string collect(const OpTree& t, std::map<std::string, std::size_t>& out) {
  std::string fp = fmt::format("{}{}:{}(", kind_code(t.kind), t.symbol.size(), t.symbol);
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    if (i) fp += ',';
    fp += collect(t.children[i], out);
  }
  fp += ')';
  ++out[fp];
  return fp;
}

}  // namespace

std::size_t OpTree::size() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.size();
  return n;
}

OpTree build_optree(std::string_view mathml) {
  Node doc = markup::parse_fragment(mathml);
  std::vector<const Node*> top;
  for (const auto& c : doc.children) {
    if (!is_blank(c)) top.push_back(&c);
  }
  if (top.size() == 1) return convert(*top.front());
  std::vector<OpTree> kids;
  for (const Node* c : top) kids.push_back(convert(*c));
  return OpTree::node(Kind::group, "", std::move(kids));
}

std::string fingerprint(const OpTree& t) {
  std::map<std::string, std::size_t> scratch;
  return collect(t, scratch);
}

std::map<std::string, std::size_t> subtree_fingerprints(const OpTree& t) {
  std::map<std::string, std::size_t> out;
  collect(t, out);
  return out;
}

double subtree_similarity(const OpTree& a, const OpTree& b) {
  auto fa = subtree_fingerprints(a);
  auto fb = subtree_fingerprints(b);
  std::size_t shared = 0;
  for (const auto& [fp, count] : fa) {
    if (auto it = fb.find(fp); it != fb.end()) shared += std::min(count, it->second);
  }
  return static_cast<double>(shared) / static_cast<double>(std::min(a.size(), b.size()));
}

}  // namespace derivgraph
