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

#include "xsearch/filtering.hpp"

#include <algorithm>

#include "xsearch/error.hpp"

namespace xsearch {

std::size_t nb_common_words(const Query& q, const TokenSet& text_tokens) {
  return q.tokens().intersection_size(text_tokens);
}

std::size_t nb_common_words(const Query& q, std::string_view text) {
  return nb_common_words(q, tokenize(text));
}

namespace {

std::size_t score_one(const Query& q, const TokenSet& title,
                      const TokenSet& desc) {
  return nb_common_words(q, title) + nb_common_words(q, desc);
}

}  // namespace

ScoreVector score_result(const Query& real, std::span<const Query> decoys,
                         const SearchResult& r) {
  const TokenSet title = tokenize(r.title);
  const TokenSet desc = tokenize(r.desc);
  ScoreVector scores;
  scores.reserve(decoys.size() + 1);
  scores.push_back(score_one(real, title, desc));
  for (const Query& d : decoys) scores.push_back(score_one(d, title, desc));
  return scores;
}

ResultSet filter_results(const Query& real, std::span<const Query> decoys,
                         const ResultSet& results) {
  ResultSet kept;
  for (const SearchResult& r : results) {
    ScoreVector scores = score_result(real, decoys, r);
    if (scores.front() == *std::max_element(scores.begin(), scores.end())) {
      kept.push_back(r);
    }
  }
  return kept;
}

nlohmann::ordered_json to_json(const SearchResult& r) {
  nlohmann::ordered_json j;
  j["title"] = r.title;
  j["desc"] = r.desc;
  j["url"] = r.url;
  return j;
}

nlohmann::ordered_json to_json(const ResultSet& rs) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : rs) arr.push_back(to_json(r));
  return arr;
}

SearchResult result_from_json(const nlohmann::json& j) {
  auto field = [&](const char* name) -> std::string {
    auto it = j.find(name);
    if (it == j.end() || !it->is_string()) {
      throw Error(ErrorKind::kParse,
                  std::string("search result lacks string field '") + name + "'");
    }
    return it->get<std::string>();
  };
  if (!j.is_object()) throw Error(ErrorKind::kParse, "search result is not an object");
  return SearchResult{field("title"), field("desc"), field("url")};
}

ResultSet results_from_json(const nlohmann::json& array) {
  if (!array.is_array()) throw Error(ErrorKind::kParse, "results is not an array");
  ResultSet out;
  out.reserve(array.size());
  for (const auto& j : array) out.push_back(result_from_json(j));
  return out;
}

}  // namespace xsearch
