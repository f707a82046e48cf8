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

#include <string>
#include <string_view>

#include "xsearch/text.hpp"

namespace xsearch {

/// A user query: the trimmed raw text and its token set. The token set is
/// computed once at construction and never diverges from raw().
class Query {
 public:
  /// Throws Error(kInvalidInput) when the text is empty after trimming.
  explicit Query(std::string_view text);

  const std::string& raw() const noexcept { return raw_; }
  const TokenSet& tokens() const noexcept { return tokens_; }

  friend bool operator==(const Query& a, const Query& b) {
    return a.raw_ == b.raw_;
  }

 private:
  std::string raw_;
  TokenSet tokens_;
};

}  // namespace xsearch
