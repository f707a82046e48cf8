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
#include <iosfwd>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "xsearch/eval/dataset.hpp"
#include "xsearch/eval/metrics.hpp"
#include "xsearch/eval/simattack.hpp"
#include "xsearch/history_store.hpp"
#include "xsearch/search_engine.hpp"

namespace xsearch::eval {

/// Independent generator for one query position and stream, so a run at a
/// larger k draws the same first decoys as a run at a smaller k.
std::mt19937_64 position_rng(std::uint64_t seed, std::size_t position,
                             std::uint32_t stream);

/// The proxy's obfuscation step as a ProtectFn. The decoy pool starts with
/// every training query in timestamp order, mirroring a proxy shared by all
/// users, and each protected query is pushed after its decoys are drawn.
/// Copies share one pool.
class XSearchProtector {
 public:
  XSearchProtector(const std::vector<QueryLogRecord>& warm_pool, std::size_t k,
                   std::uint64_t seed,
                   std::size_t history_capacity = HistoryStore::kDefaultCapacity);

  ObfuscatedQuery operator()(std::size_t position, const LabeledQuery& q) const;

  const HistoryStore& history() const noexcept { return *store_; }

 private:
  std::shared_ptr<HistoryStore> store_;
  std::size_t k_;
  std::uint64_t seed_;
};

/// Direct engine answer, then the proxy path for oq: per-sub-query search,
/// merge and filter.
PrecisionRecall measure_accuracy(const MockCorpus& corpus, const ObfuscatedQuery& oq,
                                 std::size_t per_query_limit = 20);

struct ExperimentConfig {
  std::vector<std::size_t> k_list = {0, 1, 3, 7};
  std::uint64_t seed = 1;
  /// Test queries sampled for precision and recall at each k.
  std::size_t sample_size = 100;
  bool run_privacy = true;
  bool run_accuracy = true;
  SimAttackConfig attack;
  std::size_t history_capacity = HistoryStore::kDefaultCapacity;
  std::size_t per_query_limit = 20;
  /// Rows already present for this seed are reused and new rows appended
  /// as each k completes, so an interrupted sweep resumes.
  std::optional<std::filesystem::path> csv_path;
};

struct ExperimentInputs {
  std::vector<QueryLogRecord> train;
  std::vector<QueryLogRecord> test;
  /// Needed only when accuracy is measured.
  std::optional<MockCorpus> corpus;
};

/// A skipped measurement is NaN.
struct ExperimentRow {
  std::size_t k = 0;
  std::size_t n_test = 0;
  double reident_rate = 0.0;
  double precision_mean = 0.0;
  double recall_mean = 0.0;
  std::size_t n_accuracy_queries = 0;
  std::uint64_t seed = 0;
};

struct ExperimentReport {
  std::vector<ExperimentRow> rows;
};

inline constexpr const char* kExperimentCsvHeader =
    "k,n_test,reident_rate,precision_mean,recall_mean,n_accuracy_queries,seed";

/// One pass over the test set per k, in timestamp order: each query is
/// protected, attacked, and for sampled positions also searched and
/// filtered. Throws Error(kInvalidInput) on an empty test set, a missing
/// corpus, or a CSV written with another seed.
ExperimentReport run_experiment(const ExperimentInputs& inputs, const ExperimentConfig& cfg);

void write_experiment_csv(std::ostream& out, const std::vector<ExperimentRow>& rows,
                          bool header = true);
/// Throws Error(kParse) on a wrong header or malformed row.
std::vector<ExperimentRow> read_experiment_csv(std::istream& in);

}  // namespace xsearch::eval
