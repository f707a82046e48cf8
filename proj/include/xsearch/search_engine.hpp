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
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "xsearch/search_result.hpp"
#include "xsearch/text.hpp"

namespace xsearch {

/// One engine round trip for one query string. Implementations must be safe
/// to call from several threads at once.
class SearchEngine {
 public:
  virtual ~SearchEngine() = default;
  virtual ResultSet fetch(std::string_view query_text) = 0;
};

/// Deterministic in-memory engine. Documents are ranked by the number of
/// distinct query terms found in title+desc; ties go to the smaller url.
class MockCorpus {
 public:
  MockCorpus() = default;
  explicit MockCorpus(ResultSet documents);

  /// JSON array of {"title","desc","url"}. Throws Error(kParse).
  static MockCorpus from_json(const nlohmann::json& array);
  static MockCorpus load(const std::filesystem::path& path);

  const ResultSet& documents() const noexcept { return docs_; }

  /// Top `limit` documents with a positive score. Throws Error(kInvalidInput)
  /// when limit is 0.
  ResultSet search(std::string_view query_text, std::size_t limit) const;

 private:
  ResultSet docs_;
  std::unordered_map<std::string, std::vector<std::uint32_t>> postings_;
};

inline ResultSet search_mock(const MockCorpus& corpus,
                             std::string_view query_text, std::size_t limit) {
  return corpus.search(query_text, limit);
}

/// SearchEngine adapter over a MockCorpus.
class MockEngine : public SearchEngine {
 public:
  MockEngine(const MockCorpus& corpus, std::size_t limit)
      : corpus_(corpus), limit_(limit) {}
  ResultSet fetch(std::string_view query_text) override {
    return corpus_.search(query_text, limit_);
  }

 private:
  const MockCorpus& corpus_;
  std::size_t limit_;
};

/// Round-robin interleave of the first per_list_limit entries of each list,
/// keeping the first occurrence of every url.
ResultSet merge_round_robin(std::span<const ResultSet> lists,
                            std::size_t per_list_limit);

struct OrSearchOutcome {
  ResultSet results;
  /// Some, but not all, sub-query requests failed.
  bool partial = false;
  std::size_t failed = 0;
};

/// Emulates "Q1 OR Q2 OR ..." on engines without a usable OR operator: one
/// request per sub-query, then merge_round_robin. Requests run with at most
/// max_concurrency in flight. Throws Error(kBackend) when every request
/// fails and Error(kInvalidInput) for an empty sub-query list.
OrSearchOutcome search_or_simulated(SearchEngine& engine,
                                    std::span<const std::string> sub_queries,
                                    std::size_t per_query_limit = 20,
                                    std::size_t max_concurrency = 1);

}  // namespace xsearch
