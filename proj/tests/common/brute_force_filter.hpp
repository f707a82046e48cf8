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

// Reference result filter written without any library code: its own regex
// word splitter, std::set intersections and an explicit max scan.

#pragma once

#include <algorithm>
#include <cctype>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include "xsearch/query.hpp"
#include "xsearch/search_result.hpp"

namespace xsearch::testing {

inline std::set<std::string> oracle_words(const std::string& text) {
  std::string lower;
  for (unsigned char c : text) {
    lower += c < 0x80 ? static_cast<char>(std::tolower(c)) : ' ';
  }
  static const std::regex word("[a-z0-9]+");
  std::set<std::string> out;
  for (auto it = std::sregex_iterator(lower.begin(), lower.end(), word);
       it != std::sregex_iterator(); ++it) {
    out.insert(it->str());
  }
  return out;
}

inline int oracle_common(const std::string& a, const std::string& b) {
  auto wa = oracle_words(a);
  auto wb = oracle_words(b);
  int n = 0;
  for (const auto& w : wa) n += wb.count(w) ? 1 : 0;
  return n;
}

inline ResultSet brute_force_filter(const std::string& real,
                                    const std::vector<std::string>& decoys,
                                    const ResultSet& results) {
  ResultSet kept;
  for (const auto& r : results) {
    const int mine = oracle_common(real, r.title) + oracle_common(real, r.desc);
    int best = mine;
    for (const auto& d : decoys) {
      best = std::max(best, oracle_common(d, r.title) + oracle_common(d, r.desc));
    }
    if (mine == best) kept.push_back(r);
  }
  return kept;
}

inline std::vector<std::string> raws_of(const std::vector<Query>& qs) {
  std::vector<std::string> out;
  for (const auto& q : qs) out.push_back(q.raw());
  return out;
}

}  // namespace xsearch::testing
