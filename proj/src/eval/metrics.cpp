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

#include "xsearch/eval/metrics.hpp"

#include <string>
#include <unordered_set>

namespace xsearch::eval {

PrecisionRecall precision_recall(const ResultSet& r_or, const ResultSet& r_xs) {
  std::unordered_set<std::string> direct;
  for (const auto& r : r_or) direct.insert(r.url);
  std::unordered_set<std::string> proxied;
  for (const auto& r : r_xs) proxied.insert(r.url);
  std::size_t both = 0;
  for (const auto& url : proxied) both += direct.count(url);

  PrecisionRecall out;
  out.recall = direct.empty() ? 1.0
                              : static_cast<double>(both) / static_cast<double>(direct.size());
  if (proxied.empty()) {
    out.precision = direct.empty() ? 1.0 : 0.0;
  } else {
    out.precision = static_cast<double>(both) / static_cast<double>(proxied.size());
  }
  return out;
}

}  // namespace xsearch::eval
