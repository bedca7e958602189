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

// Derivation extraction through a chat-completion model. Replies use a
// line grammar, one source equation per line:
//
//   1 -> 2, 3;
//   2 ->;

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "derivgraph/analytic.hpp"
#include "derivgraph/ingest.hpp"

namespace derivgraph {

std::string build_prompt(std::string_view article_text,
                         std::span<const std::string> equation_numbers);

/// Article text with each placeholder replaced by "<alttext> (<number>)".
std::string prompt_article_text(const ParsedArticle& article);

/// Graph over `numbers` (display numbers in document order). Unknown
/// numbers, self-loops and cycle-closing edges are dropped with notices.
/// A line outside the grammar throws ParseError whose offset is the line's
/// start.
Extraction parse_response(std::string_view text, std::span<const std::string> numbers);

/// Inverse of parse_response for a graph whose nodes are display numbers.
std::string render_response(const DerivationGraph& g);

class LlmTransport {
 public:
  virtual ~LlmTransport() = default;
  /// Reply text for `prompt`; failures throw TransportError.
  virtual std::string send(const std::string& prompt) = 0;
};

class TransportError : public Error {
 public:
  using Error::Error;
};

/// Replays canned replies in order; once exhausted the last one repeats.
class ScriptedTransport : public LlmTransport {
 public:
  explicit ScriptedTransport(std::vector<std::string> replies);
  std::string send(const std::string& prompt) override;
  std::size_t calls() const;
  std::vector<std::string> prompts() const;

 private:
  mutable std::mutex mu_;
  std::vector<std::string> replies_;
  std::vector<std::string> prompts_;
};

/// Per-article scripted replies loaded from {"<article id>": ["reply", ...]}.
class RecordedReplies {
 public:
  static RecordedReplies load(const std::filesystem::path& path);
  static RecordedReplies parse(std::string_view json_text);
  /// Throws Error when the article has no recording.
  std::unique_ptr<ScriptedTransport> transport_for(const std::string& article_id) const;
  bool contains(const std::string& article_id) const;

 private:
  std::map<std::string, std::vector<std::string>> replies_;
};

class LlmFormatError : public Error {
 public:
  LlmFormatError(const std::string& what, std::string raw_response, std::size_t attempts)
      : Error(what), raw_(std::move(raw_response)), attempts_(attempts) {}
  const std::string& raw_response() const { return raw_; }
  std::size_t attempts() const { return attempts_; }

 private:
  std::string raw_;
  std::size_t attempts_;
};

struct LlmExtraction {
  Extraction result;  // graph over the article's equation IDs
  std::size_t attempts = 0;
};

/// Sends the prompt, re-asking up to `retries` times while the reply does
/// not parse. Exhaustion throws LlmFormatError carrying the last reply;
/// transport failures propagate unchanged.
LlmExtraction extract_via_llm(LlmTransport& transport, const ParsedArticle& article,
                              int retries = 2);

struct HttpConfig {
  std::string endpoint;  // e.g. https://host/v1/chat/completions
  std::string model;
  std::string api_key;
  int timeout_seconds = 120;

  /// DERIVGRAPH_LLM_ENDPOINT, DERIVGRAPH_LLM_MODEL, DERIVGRAPH_LLM_API_KEY.
  static HttpConfig from_env();
};

/// OpenAI-style chat-completion client.
class HttpTransport : public LlmTransport {
 public:
  explicit HttpTransport(HttpConfig config);
  std::string send(const std::string& prompt) override;

  /// Request body for `prompt`, and the reply text of a response body.
  static std::string request_body(const HttpConfig& config, const std::string& prompt);
  static std::string reply_text(std::string_view response_body);

 private:
  HttpConfig config_;
};

}  // namespace derivgraph
