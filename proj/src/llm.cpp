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

#include "derivgraph/llm.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

#include "derivgraph/corpus.hpp"

namespace derivgraph {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_number_token(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '.';
  });
}

// "(4)" and "4" both name equation 4.
std::string_view strip_parens(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && s.front() == '(' && s.back() == ')') s = trim(s.substr(1, s.size() - 2));
  return s;
}

struct Statement {
  std::string source;
  std::vector<std::string> targets;
};

std::vector<Statement> parse_line(std::string_view line, std::size_t line_no,
                                  std::size_t offset) {
  auto fail = [&](std::string_view why) -> ParseError {
    return ParseError(fmt::format("reply line {} '{}': {}", line_no, line, why), offset);
  };
  std::string_view body = trim(line);
  if (body.empty() || body.back() != ';') throw fail("expected ';' at end of line");
  std::vector<Statement> out;
  while (!body.empty()) {
    std::size_t semi = body.find(';');
    std::string_view stmt = trim(body.substr(0, semi));
    body = trim(body.substr(semi + 1));
    std::size_t arrow = stmt.find("->");
    if (arrow == std::string_view::npos) throw fail("expected '->'");
    Statement s;
    std::string_view src = strip_parens(stmt.substr(0, arrow));
    if (!is_number_token(src)) throw fail("expected an equation number before '->'");
    s.source = std::string(src);
    std::string_view rest = trim(stmt.substr(arrow + 2));
    if (!rest.empty()) {
      std::size_t b = 0;
      while (b <= rest.size()) {
        std::size_t e = rest.find(',', b);
        if (e == std::string_view::npos) e = rest.size();
        std::string_view tok = strip_parens(rest.substr(b, e - b));
        if (!is_number_token(tok)) throw fail("expected a comma-separated list of equation numbers");
        s.targets.emplace_back(tok);
        if (e == rest.size()) break;
        b = e + 1;
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

std::string build_prompt(std::string_view article_text,
                         std::span<const std::string> equation_numbers) {
  std::string list;
  for (std::size_t i = 0; i < equation_numbers.size(); ++i) {
    if (i) list += '\n';
    list += equation_numbers[i];
  }
  std::string out;
  out += "I have the following article that contains various mathematical equations: \n";
  out += article_text;
  out += "\n From this article, I have extracted the list of equations, numbers as follows: \n";
  out += list;
  out +=
      "\n Analyze the context of the article to identify which equations are derived from "
      "each equation. Provide the output as a list and nothing else, with the format: "
      "w -> x, y, z;\n x -> h, t;\n ... If no equations are derived from a certain equation, "
      "return an empty list with the format: t ->;\n";
  return out;
}

std::string prompt_article_text(const ParsedArticle& article) {
  std::string out;
  const std::string& text = article.text;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text.compare(i, 2, "[[") == 0) {
      std::size_t close = text.find("]]", i + 2);
      if (close != std::string::npos) {
        const KeyEquation* eq = article.find(std::string_view(text).substr(i + 2, close - i - 2));
        if (eq) out += fmt::format("{} ({})", eq->alttext, eq->number_label);
        i = close + 2;
        continue;
      }
    }
    out += text[i++];
  }
  return out;
}

Extraction parse_response(std::string_view text, std::span<const std::string> numbers) {
  Extraction out{DerivationGraph(std::vector<std::string>(numbers.begin(), numbers.end())), {}};
  std::size_t statements = 0;
  std::size_t offset = 0;
  std::size_t line_no = 0;
  while (offset <= text.size()) {
    std::size_t nl = text.find('\n', offset);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = trim(text.substr(offset, nl - offset));
    ++line_no;
    // Models often wrap the list in a code fence.
    if (!line.empty() && !line.starts_with("```")) {
      for (auto& s : parse_line(line, line_no, offset)) {
        ++statements;
        if (!out.graph.contains(s.source)) {
          out.notices.push_back(fmt::format("line {}: unknown equation {}", line_no, s.source));
          continue;
        }
        for (const auto& t : s.targets) {
          if (!out.graph.contains(t)) {
            out.notices.push_back(fmt::format("line {}: unknown equation {}", line_no, t));
            continue;
          }
          switch (out.graph.add_edge(s.source, t)) {
            case EdgeStatus::self_loop:
              out.notices.push_back(fmt::format("line {}: dropped self-loop {}", line_no, t));
              break;
            case EdgeStatus::closes_cycle:
              out.notices.push_back(
                  fmt::format("line {}: dropped {} -> {}: closes a cycle", line_no, s.source, t));
              break;
            case EdgeStatus::added:
            case EdgeStatus::duplicate:
              break;
          }
        }
      }
    }
    if (nl == text.size()) break;
    offset = nl + 1;
  }
  if (statements == 0) throw ParseError("reply contains no adjacency lines", 0);
  return out;
}

std::string render_response(const DerivationGraph& g) {
  std::string out;
  for (std::size_t u = 0; u < g.size(); ++u) {
    std::vector<std::size_t> targets = g.successors(u);
    std::sort(targets.begin(), targets.end());
    out += g.nodes()[u];
    out += " ->";
    for (std::size_t k = 0; k < targets.size(); ++k) {
      out += k ? ", " : " ";
      out += g.nodes()[targets[k]];
    }
    out += ";\n";
  }
  return out;
}

ScriptedTransport::ScriptedTransport(std::vector<std::string> replies)
    : replies_(std::move(replies)) {
  if (replies_.empty()) throw Error("scripted transport needs at least one reply");
}

std::string ScriptedTransport::send(const std::string& prompt) {
  std::lock_guard lock(mu_);
  const std::size_t k = std::min(prompts_.size(), replies_.size() - 1);
  prompts_.push_back(prompt);
  return replies_[k];
}

std::size_t ScriptedTransport::calls() const {
  std::lock_guard lock(mu_);
  return prompts_.size();
}

std::vector<std::string> ScriptedTransport::prompts() const {
  std::lock_guard lock(mu_);
  return prompts_;
}

RecordedReplies RecordedReplies::parse(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(fmt::format("recorded replies: {}", e.what()), e.byte);
  }
  if (!j.is_object()) throw Error("recorded replies must be an object keyed by article ID");
  RecordedReplies r;
  for (const auto& [id, list] : j.items()) {
    std::vector<std::string> replies;
    if (list.is_string()) {
      replies.push_back(list.get<std::string>());
    } else if (list.is_array() && !list.empty() &&
               std::all_of(list.begin(), list.end(), [](const auto& v) { return v.is_string(); })) {
      replies = list.get<std::vector<std::string>>();
    } else {
      throw Error(fmt::format("recorded replies for {} must be a string or a non-empty list of strings", id));
    }
    r.replies_.emplace(id, std::move(replies));
  }
  return r;
}

RecordedReplies RecordedReplies::load(const std::filesystem::path& path) {
  return parse(read_file(path));
}

bool RecordedReplies::contains(const std::string& article_id) const {
  return replies_.count(article_id) > 0;
}

std::unique_ptr<ScriptedTransport> RecordedReplies::transport_for(
    const std::string& article_id) const {
  auto it = replies_.find(article_id);
  if (it == replies_.end()) throw Error(fmt::format("no recorded replies for article {}", article_id));
  return std::make_unique<ScriptedTransport>(it->second);
}

LlmExtraction extract_via_llm(LlmTransport& transport, const ParsedArticle& article,
                              int retries) {
  if (retries < 0) throw UsageError("retries must be non-negative");
  LlmExtraction out;
  out.result.graph = DerivationGraph(article.equation_ids());
  if (article.equations.empty()) return out;

  const std::vector<std::string> numbers = article.number_labels();
  std::map<std::string, std::string> id_of;
  for (const auto& eq : article.equations) {
    if (!id_of.emplace(eq.number_label, eq.eq_id).second) {
      throw Error(fmt::format("article {}: equation number {} appears twice",
                              article.article_id, eq.number_label));
    }
  }
  const std::string prompt = build_prompt(prompt_article_text(article), numbers);
  std::string reply;
  std::string last_error;
  const auto max_attempts = static_cast<std::size_t>(retries) + 1;
  for (std::size_t attempt = 1; attempt <= max_attempts; ++attempt) {
    reply = transport.send(prompt);
    out.attempts = attempt;
    try {
      Extraction parsed = parse_response(reply, numbers);
      for (const auto& [u, v] : parsed.graph.edge_names()) {
        out.result.graph.add_edge(id_of.at(u), id_of.at(v));
      }
      out.result.notices = std::move(parsed.notices);
      if (attempt > 1) {
        out.result.notices.push_back(fmt::format("reply parsed after {} attempts", attempt));
      }
      return out;
    } catch (const ParseError& e) {
      last_error = e.what();
    }
  }
  throw LlmFormatError(fmt::format("article {}: no well-formed reply after {} attempts ({})",
                                   article.article_id, max_attempts, last_error),
                       reply, max_attempts);
}

HttpConfig HttpConfig::from_env() {
  auto get = [](const char* name) {
    const char* v = std::getenv(name);
    return v ? std::string(v) : std::string();
  };
  HttpConfig c;
  c.endpoint = get("DERIVGRAPH_LLM_ENDPOINT");
  c.model = get("DERIVGRAPH_LLM_MODEL");
  c.api_key = get("DERIVGRAPH_LLM_API_KEY");
  if (std::string t = get("DERIVGRAPH_LLM_TIMEOUT"); !t.empty()) {
    try {
      c.timeout_seconds = std::stoi(t);
    } catch (const std::exception&) {
      throw UsageError(fmt::format("DERIVGRAPH_LLM_TIMEOUT is not an integer: '{}'", t));
    }
  }
  return c;
}

std::string HttpTransport::request_body(const HttpConfig& config, const std::string& prompt) {
  nlohmann::ordered_json body;
  body["model"] = config.model;
  body["messages"] = nlohmann::ordered_json::array(
      {nlohmann::ordered_json{{"role", "user"}, {"content", prompt}}});
  body["temperature"] = 0;
  return body.dump();
}

std::string HttpTransport::reply_text(std::string_view response_body) {
  try {
    auto j = nlohmann::json::parse(response_body);
    return j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw TransportError(fmt::format("unexpected chat-completion response: {}", e.what()));
  }
}

}  // namespace derivgraph
