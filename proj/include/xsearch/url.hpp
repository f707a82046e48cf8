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
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xsearch/search_result.hpp"

namespace xsearch {

/// RFC 3986 percent-encoding: everything except ALPHA / DIGIT / "-._~" is
/// escaped with uppercase hex.
std::string percent_encode(std::string_view text);

/// Decodes %XX escapes once. '+' is left alone. Returns nullopt on a
/// truncated or non-hex escape.
std::optional<std::string> percent_decode(std::string_view text);

/// scheme "://" host, with no whitespace or control bytes anywhere.
bool is_valid_url(std::string_view url);

struct HttpUrl {
  std::string scheme;  // "http" or "https"
  std::string host;
  std::uint16_t port = 80;
  std::string target;  // path plus query, always starts with '/'
};

/// Throws Error(kInvalidInput) for anything but http(s)://host[:port][/...].
HttpUrl parse_http_url(std::string_view url);

/// Raw (still encoded) value of the first query parameter with this name.
std::optional<std::string_view> query_param(std::string_view url,
                                            std::string_view name);

/// Describes analytics wrapper links such as
/// https://r.engine.example/rd?u=<encoded target>.
struct RedirectPolicy {
  std::string param = "u";
  /// When set, only URLs starting with this prefix are unwrapped. When empty,
  /// any URL whose param value starts with "http" is treated as a wrapper.
  std::string prefix;
};

/// Replaces wrapper URLs with their once-decoded target. Results whose target
/// cannot be decoded keep their URL and their index is appended to flagged.
ResultSet sanitize_results(const ResultSet& results,
                           const RedirectPolicy& policy,
                           std::vector<std::size_t>* flagged = nullptr);

}  // namespace xsearch
