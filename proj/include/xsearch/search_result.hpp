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
#include <vector>

#include <nlohmann/json.hpp>

namespace xsearch {

struct SearchResult {
  std::string title;
  std::string desc;
  std::string url;

  friend bool operator==(const SearchResult&, const SearchResult&) = default;
};

using ResultSet = std::vector<SearchResult>;

/// Field order is title, desc, url so that serialized arrays compare
/// byte-for-byte across producers.
nlohmann::ordered_json to_json(const SearchResult& r);
nlohmann::ordered_json to_json(const ResultSet& rs);

/// Throws Error(kParse) on missing or non-string fields.
SearchResult result_from_json(const nlohmann::json& j);
ResultSet results_from_json(const nlohmann::json& array);

}  // namespace xsearch
