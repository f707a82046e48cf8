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
#include <span>
#include <string_view>
#include <vector>

#include "xsearch/query.hpp"
#include "xsearch/search_result.hpp"

namespace xsearch {

/// Distinct terms shared by the query and the text.
std::size_t nb_common_words(const Query& q, std::string_view text);
std::size_t nb_common_words(const Query& q, const TokenSet& text_tokens);

/// Per-sub-query scores for one result. Entry 0 is the real query, followed
/// by the decoys in the order given.
using ScoreVector = std::vector<std::size_t>;

ScoreVector score_result(const Query& real, std::span<const Query> decoys,
                         const SearchResult& r);

/// Keeps the results whose score for the real query equals the maximum over
/// all sub-queries, where a score is common words with the title plus common
/// words with the description. Ties keep the result. Order is preserved.
ResultSet filter_results(const Query& real, std::span<const Query> decoys,
                         const ResultSet& results);

}  // namespace xsearch
