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

#include "xsearch/eval/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <random>
#include <set>

#include "xsearch/error.hpp"

namespace xsearch::eval {
namespace {

// 2006-03-01 00:00:00 UTC, the start of the AOL collection window.
constexpr std::int64_t kEpochBase = 1'141'171'200;

std::string term_name(std::size_t user, std::size_t i) {
  return "u" + std::to_string(user) + "t" + std::to_string(i);
}

std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

}  // namespace

void SyntheticConfig::validate() const {
  if (users == 0 || queries_per_user == 0 || terms_per_query == 0) {
    throw Error(ErrorKind::kInvalidInput, "users, queries and terms must be positive");
  }
  if (vocab_per_user < terms_per_query) {
    throw Error(ErrorKind::kInvalidInput, "vocabulary smaller than a query");
  }
  if (!(overlap >= 0.0 && overlap <= 1.0)) {
    throw Error(ErrorKind::kInvalidInput, "overlap must lie in [0, 1]");
  }
  if (!(zipf_exponent >= 0.0)) {
    throw Error(ErrorKind::kInvalidInput, "zipf exponent must be non-negative");
  }
}

SyntheticDataset generate_clustered_dataset(const SyntheticConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  SyntheticDataset out;
  out.own_terms.resize(cfg.users);
  for (std::size_t u = 0; u < cfg.users; ++u) {
    for (std::size_t i = 0; i < cfg.vocab_per_user; ++i) {
      out.own_terms[u].push_back(term_name(u, i));
    }
  }

  const auto borrowed = cfg.users > 1 ? static_cast<std::size_t>(std::lround(
                                            cfg.overlap * static_cast<double>(cfg.vocab_per_user)))
                                      : 0;
  std::vector<std::vector<std::string>> vocab(cfg.users);
  for (std::size_t u = 0; u < cfg.users; ++u) {
    auto& v = vocab[u];
    v.assign(out.own_terms[u].begin(),
             out.own_terms[u].end() - static_cast<std::ptrdiff_t>(borrowed));
    std::vector<std::string> foreign;
    for (std::size_t w = 0; w < cfg.users; ++w) {
      if (w != u) foreign.insert(foreign.end(), out.own_terms[w].begin(), out.own_terms[w].end());
    }
    std::sample(foreign.begin(), foreign.end(), std::back_inserter(v), borrowed, rng);
    std::shuffle(v.begin(), v.end(), rng);
  }

  std::vector<double> weights(cfg.vocab_per_user);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    weights[i] = 1.0 / std::pow(static_cast<double>(i + 1), cfg.zipf_exponent);
  }
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());

  std::int64_t t = kEpochBase;
  for (std::size_t q = 0; q < cfg.queries_per_user; ++q) {
    for (std::size_t u = 0; u < cfg.users; ++u) {
      std::set<std::string> terms;
      while (terms.size() < cfg.terms_per_query) terms.insert(vocab[u][pick(rng)]);
      out.records.push_back({std::to_string(100000 + u),
                             join({terms.begin(), terms.end()}), t++});
    }
  }
  return out;
}

ResultSet generate_topic_corpus(const SyntheticDataset& dataset,
                                const TopicCorpusConfig& cfg) {
  if (cfg.topics == 0 || cfg.docs_per_topic == 0) {
    throw Error(ErrorKind::kInvalidInput, "topics and documents must be positive");
  }
  std::mt19937_64 rng(cfg.seed);
  ResultSet docs;
  for (std::size_t t = 0; t < cfg.topics; ++t) {
    std::vector<std::string> vocab;
    for (std::size_t u = t; u < dataset.own_terms.size(); u += cfg.topics) {
      vocab.insert(vocab.end(), dataset.own_terms[u].begin(), dataset.own_terms[u].end());
    }
    if (vocab.size() < std::max(cfg.title_terms, cfg.desc_terms)) {
      throw Error(ErrorKind::kInvalidInput,
                  "topic " + std::to_string(t) + " has too few terms for a document");
    }
    for (std::size_t d = 0; d < cfg.docs_per_topic; ++d) {
      std::vector<std::string> title, desc;
      std::sample(vocab.begin(), vocab.end(), std::back_inserter(title), cfg.title_terms, rng);
      std::sample(vocab.begin(), vocab.end(), std::back_inserter(desc), cfg.desc_terms, rng);
      std::shuffle(title.begin(), title.end(), rng);
      std::shuffle(desc.begin(), desc.end(), rng);
      docs.push_back({join(title), join(desc),
                      "http://topic" + std::to_string(t) + ".example/doc" + std::to_string(d)});
    }
  }
  return docs;
}

}  // namespace xsearch::eval
