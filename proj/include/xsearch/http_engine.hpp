// Copyright 2026 The X-Search Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xsearch/search_engine.hpp"
#include "xsearch/socket_ops.hpp"
#include "xsearch/url.hpp"

namespace xsearch {

/// Turns an engine response body into result triples. Engine markup drift is
/// contained here.
class ResultExtractor {
 public:
  virtual ~ResultExtractor() = default;
  virtual ResultSet extract(std::string_view body) const = 0;
};

/// Accepts {"results":[{"title","desc","url"}]}, a bare array of those, or a
/// Bing Web Search API payload ({"webPages":{"value":[{"name","snippet","url"}]}}).
class JsonResultExtractor : public ResultExtractor {
 public:
  ResultSet extract(std::string_view body) const override;
};

/// Bing-style SERP markup: one <li class="b_algo"> block per result with the
/// link in the first <a href> and the snippet in the first <p>.
class HtmlResultExtractor : public ResultExtractor {
 public:
  ResultSet extract(std::string_view body) const override;
};

/// "json" or "html"; throws Error(kInvalidInput) otherwise.
std::shared_ptr<const ResultExtractor> make_extractor(std::string_view name);

struct HttpResponse {
  int status = 0;
  std::map<std::string, std::string> headers;  // lowercased names
  std::string body;
};

/// Parses a complete HTTP/1.x response, decoding chunked bodies. Throws
/// Error(kParse).
HttpResponse parse_http_response(std::string_view raw);

struct HttpEngineOptions {
  std::string base_url;       // e.g. http://www.bing.com/search
  std::string param = "q";    // query parameter name
  std::vector<std::pair<std::string, std::string>> headers;
  std::shared_ptr<const ResultExtractor> extractor =
      std::make_shared<JsonResultExtractor>();
  std::size_t max_response_bytes = 8u << 20;
};

/// Live engine client: a plain HTTP/1.1 GET per query over SocketOps, so the
/// same code runs inside the trusted side on top of ocalls.
class HttpEngine : public SearchEngine {
 public:
  /// Throws Error(kInvalidInput) for an unusable base_url, including https,
  /// which would need TLS termination on the trusted side.
  HttpEngine(SocketOps& sockets, HttpEngineOptions options);

  /// Throws Error(kNetwork), Error(kRateLimited) on 429,
  /// Error(kHttpStatus) on any other non-2xx, Error(kParse).
  ResultSet fetch(std::string_view query_text) override;

  /// The exact bytes fetch() sends for this query.
  std::string build_request(std::string_view query_text) const;

 private:
  SocketOps& sockets_;
  HttpEngineOptions options_;
  HttpUrl url_;
};

}  // namespace xsearch
