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

// Small helpers shared by the command-line tools.

#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "xsearch/attestation.hpp"
#include "xsearch/error.hpp"
#include "xsearch/secure_channel.hpp"

namespace xsearch::tools {

inline Key32 key_from_hex(std::string_view hex) {
  Bytes b = from_hex(hex);
  Key32 k{};
  if (b.size() != k.size()) throw Error(ErrorKind::kInvalidInput, "key must be 64 hex characters");
  std::copy(b.begin(), b.end(), k.begin());
  return k;
}

inline std::optional<Key32> optional_key(const std::string& hex) {
  if (hex.empty()) return std::nullopt;
  return key_from_hex(hex);
}

/// Splits "a,b,c" into its non-empty fields.
inline std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string field;
  while (std::getline(in, field, ',')) {
    if (!field.empty()) out.push_back(field);
  }
  return out;
}

}  // namespace xsearch::tools
