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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace xsearch {

/// Distinct lowercase ASCII alphanumeric terms, kept sorted so that
/// intersections are a linear merge.
class TokenSet {
 public:
  TokenSet() = default;

  /// Builds from arbitrary terms; sorts and removes duplicates. Terms are
  /// expected to already satisfy the lowercase-alphanumeric rule.
  static TokenSet from_terms(std::vector<std::string> terms);

  const std::vector<std::string>& terms() const& noexcept { return terms_; }
  std::vector<std::string> terms() && noexcept { return std::move(terms_); }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }
  bool contains(std::string_view term) const;

  /// Number of terms present in both sets.
  std::size_t intersection_size(const TokenSet& other) const;

  friend bool operator==(const TokenSet&, const TokenSet&) = default;

 private:
  std::vector<std::string> terms_;
};

/// Lowercases and splits on every byte that is not an ASCII letter or digit.
/// Bytes outside ASCII (including UTF-8 continuation bytes) are separators.
TokenSet tokenize(std::string_view text);

/// Strips leading and trailing ASCII whitespace.
std::string_view trim(std::string_view text);

}  // namespace xsearch
