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

#include <httplib.h>

#include <fmt/format.h>

#include "derivgraph/llm.hpp"
#include "derivgraph/pipeline.hpp"

namespace derivgraph {

namespace {

struct Url {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Url split_url(const std::string& url) {
  auto scheme = url.find("://");
  if (scheme == std::string::npos) {
    throw UsageError(fmt::format("LLM endpoint must be an http(s) URL, got '{}'", url));
  }
  auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

}  // namespace

HttpTransport::HttpTransport(HttpConfig config) : config_(std::move(config)) {
  if (config_.endpoint.empty()) {
    throw UsageError("no LLM endpoint configured (set DERIVGRAPH_LLM_ENDPOINT or --llm-endpoint)");
  }
  split_url(config_.endpoint);
}

std::string HttpTransport::send(const std::string& prompt) {
  const Url url = split_url(config_.endpoint);
  httplib::Client client(url.origin);
  client.set_connection_timeout(config_.timeout_seconds, 0);
  client.set_read_timeout(config_.timeout_seconds, 0);
  client.set_write_timeout(config_.timeout_seconds, 0);
  httplib::Headers headers;
  if (!config_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + config_.api_key);
  }
  auto res = client.Post(url.path, headers, request_body(config_, prompt), "application/json");
  if (!res) {
    throw TransportError(fmt::format("request to {} failed: {}", config_.endpoint,
                                     httplib::to_string(res.error())));
  }
  if (res->status != 200) {
    throw TransportError(fmt::format("{} answered HTTP {}: {}", config_.endpoint, res->status,
                                     res->body.substr(0, 200)));
  }
  return reply_text(res->body);
}

TransportFactory make_transport_factory(const RunConfig& config) {
  if (config.mock_llm) {
    auto recorded = std::make_shared<RecordedReplies>(RecordedReplies::load(*config.mock_llm));
    return [recorded](const std::string& article_id) -> std::unique_ptr<LlmTransport> {
      return recorded->transport_for(article_id);
    };
  }
  HttpConfig http = HttpConfig::from_env();
  if (config.llm_endpoint) http.endpoint = *config.llm_endpoint;
  HttpTransport probe(http);  // validates the endpoint up front
  return [http](const std::string&) -> std::unique_ptr<LlmTransport> {
    return std::make_unique<HttpTransport>(http);
  };
}

}  // namespace derivgraph
