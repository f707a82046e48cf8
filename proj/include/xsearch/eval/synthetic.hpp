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
#include <string>
#include <vector>

#include "xsearch/eval/dataset.hpp"
#include "xsearch/search_result.hpp"

namespace xsearch::eval {

/// Users with mostly private vocabularies. Each user owns a cluster of
/// vocab_per_user terms, then swaps round(overlap * vocab_per_user) of them
/// for terms owned by other users. Term popularity within a user follows a
/// Zipf law, so users repeat their favourite queries the way real logs do.
struct SyntheticConfig {
  std::size_t users = 20;
  std::size_t vocab_per_user = 12;
  std::size_t queries_per_user = 60;
  std::size_t terms_per_query = 2;
  double overlap = 0.1;
  double zipf_exponent = 1.0;
  std::uint64_t seed = 1;

  /// Throws Error(kInvalidInput) on an unusable combination.
  void validate() const;
};

struct SyntheticDataset {
  /// Queries interleaved across users, one second apart.
  std::vector<QueryLogRecord> records;
  /// The cluster each user started from, before any swap.
  std::vector<std::vector<std::string>> own_terms;
};

SyntheticDataset generate_clustered_dataset(const SyntheticConfig& cfg);

/// A corpus of well-separated topics over the dataset's vocabulary. Topic t
/// draws from the clusters of users u with u % topics == t. Titles and
/// descriptions are independent samples without replacement.
struct TopicCorpusConfig {
  std::size_t topics = 10;
  std::size_t docs_per_topic = 60;
  std::size_t title_terms = 3;
  std::size_t desc_terms = 6;
  std::uint64_t seed = 1;
};

ResultSet generate_topic_corpus(const SyntheticDataset& dataset,
                                const TopicCorpusConfig& cfg);

}  // namespace xsearch::eval
