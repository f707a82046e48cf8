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

#include "xsearch/search_engine.hpp"

#include <algorithm>
#include <exception>
#include <fstream>
#include <future>
#include <optional>
#include <unordered_set>

#include "xsearch/error.hpp"

namespace xsearch {

MockCorpus::MockCorpus(ResultSet documents) : docs_(std::move(documents)) {
  for (std::uint32_t i = 0; i < docs_.size(); ++i) {
    TokenSet tokens = tokenize(docs_[i].title + " " + docs_[i].desc);
    for (const auto& term : tokens.terms()) postings_[term].push_back(i);
  }
}

MockCorpus MockCorpus::from_json(const nlohmann::json& array) {
  return MockCorpus(results_from_json(array));
}

MockCorpus MockCorpus::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open corpus " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, "corpus " + path.string() + ": " + e.what());
  }
  return from_json(j);
}

ResultSet MockCorpus::search(std::string_view query_text,
                             std::size_t limit) const {
  if (limit == 0) throw Error(ErrorKind::kInvalidInput, "search limit must be >= 1");
  std::unordered_map<std::uint32_t, std::size_t> scores;
  for (const auto& term : tokenize(query_text).terms()) {
    auto it = postings_.find(term);
    if (it == postings_.end()) continue;
    for (std::uint32_t doc : it->second) ++scores[doc];
  }
  std::vector<std::pair<std::uint32_t, std::size_t>> ranked(scores.begin(),
                                                            scores.end());
  auto better = [&](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    const std::string& ua = docs_[a.first].url;
    const std::string& ub = docs_[b.first].url;
    if (ua != ub) return ua < ub;
    return a.first < b.first;
  };
  std::size_t n = std::min(limit, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(n),
                    ranked.end(), better);
  ResultSet out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(docs_[ranked[i].first]);
  return out;
}

ResultSet merge_round_robin(std::span<const ResultSet> lists,
                            std::size_t per_list_limit) {
  ResultSet merged;
  std::unordered_set<std::string> seen;
  std::size_t longest = 0;
  for (const auto& l : lists) longest = std::max(longest, std::min(l.size(), per_list_limit));
  for (std::size_t rank = 0; rank < longest; ++rank) {
    for (const auto& l : lists) {
      if (rank >= l.size() || rank >= per_list_limit) continue;
      if (seen.insert(l[rank].url).second) merged.push_back(l[rank]);
    }
  }
  return merged;
}

OrSearchOutcome search_or_simulated(SearchEngine& engine,
                                    std::span<const std::string> sub_queries,
                                    std::size_t per_query_limit,
                                    std::size_t max_concurrency) {
  if (sub_queries.empty()) {
    throw Error(ErrorKind::kInvalidInput, "OR query needs at least one sub-query");
  }
  const std::size_t n = sub_queries.size();
  std::vector<std::optional<ResultSet>> lists(n);
  std::vector<std::exception_ptr> errors(n);

  auto run_one = [&](std::size_t i) {
    try {
      lists[i] = engine.fetch(sub_queries[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  if (max_concurrency <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) run_one(i);
  } else {
    for (std::size_t start = 0; start < n; start += max_concurrency) {
      std::vector<std::future<void>> batch;
      std::size_t end = std::min(n, start + max_concurrency);
      for (std::size_t i = start; i < end; ++i) {
        batch.push_back(std::async(std::launch::async, run_one, i));
      }
      for (auto& f : batch) f.get();
    }
  }

  OrSearchOutcome out;
  std::vector<ResultSet> ok;
  ok.reserve(n);
  std::string first_error;
  for (std::size_t i = 0; i < n; ++i) {
    if (lists[i]) {
      ok.push_back(std::move(*lists[i]));
      continue;
    }
    ++out.failed;
    if (first_error.empty()) {
      try {
        std::rethrow_exception(errors[i]);
      } catch (const Error& e) {
        first_error = std::string(to_string(e.kind())) + ": " + e.what();
      } catch (const std::exception& e) {
        first_error = e.what();
      }
    }
  }
  if (ok.empty()) {
    throw Error(ErrorKind::kBackend,
                "all " + std::to_string(n) + " engine requests failed (" +
                    first_error + ")");
  }
  out.partial = out.failed > 0;
  out.results = merge_round_robin(ok, per_query_limit);
  return out;
}

}  // namespace xsearch
