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

#include "xsearch/eval/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <iterator>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "xsearch/error.hpp"
#include "xsearch/filtering.hpp"

namespace xsearch::eval {
namespace {

constexpr std::uint32_t kProtectStream = 0;
constexpr std::uint32_t kSampleStream = 1;

std::vector<std::size_t> sample_positions(std::size_t n, std::size_t want,
                                          std::uint64_t seed) {
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  std::vector<std::size_t> picked;
  auto rng = position_rng(seed, 0, kSampleStream);
  std::sample(all.begin(), all.end(), std::back_inserter(picked), want, rng);
  return picked;
}

ExperimentRow run_one_k(const ExperimentInputs& in, const std::vector<LabeledQuery>& test,
                        const SimAttack* attack, std::size_t k,
                        const ExperimentConfig& cfg) {
  ExperimentRow row;
  row.k = k;
  row.seed = cfg.seed;
  row.n_test = test.size();
  row.reident_rate = std::numeric_limits<double>::quiet_NaN();
  row.precision_mean = std::numeric_limits<double>::quiet_NaN();
  row.recall_mean = std::numeric_limits<double>::quiet_NaN();

  std::vector<bool> sampled(test.size(), false);
  if (cfg.run_accuracy) {
    for (std::size_t i : sample_positions(test.size(), cfg.sample_size, cfg.seed)) {
      sampled[i] = true;
    }
  }

  XSearchProtector protect(in.train, k, cfg.seed, cfg.history_capacity);
  std::size_t identified = 0;
  double precision_sum = 0.0;
  double recall_sum = 0.0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    ObfuscatedQuery oq = protect(i, test[i]);
    if (attack) {
      auto hit = attack->identify(oq.sub_queries);
      if (hit && hit->user_id == test[i].user_id && hit->sub_query_index == oq.real_index) {
        ++identified;
      }
    }
    if (sampled[i]) {
      auto pr = measure_accuracy(*in.corpus, oq, cfg.per_query_limit);
      precision_sum += pr.precision;
      recall_sum += pr.recall;
      ++row.n_accuracy_queries;
    }
  }
  if (attack) {
    row.reident_rate = static_cast<double>(identified) / static_cast<double>(test.size());
  }
  if (row.n_accuracy_queries > 0) {
    const auto n = static_cast<double>(row.n_accuracy_queries);
    row.precision_mean = precision_sum / n;
    row.recall_mean = recall_sum / n;
  }
  return row;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

std::mt19937_64 position_rng(std::uint64_t seed, std::size_t position,
                             std::uint32_t stream) {
  const auto pos = static_cast<std::uint64_t>(position);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(pos), static_cast<std::uint32_t>(pos >> 32),
                    stream};
  return std::mt19937_64(seq);
}

XSearchProtector::XSearchProtector(const std::vector<QueryLogRecord>& warm_pool,
                                   std::size_t k, std::uint64_t seed,
                                   std::size_t history_capacity)
    : store_(std::make_shared<HistoryStore>(history_capacity)), k_(k), seed_(seed) {
  std::vector<const QueryLogRecord*> order;
  order.reserve(warm_pool.size());
  for (const auto& r : warm_pool) order.push_back(&r);
  std::stable_sort(order.begin(), order.end(),
                   [](const auto* a, const auto* b) { return a->timestamp < b->timestamp; });
  for (const auto* r : order) store_->push(Query(r->query));
}

ObfuscatedQuery XSearchProtector::operator()(std::size_t position,
                                             const LabeledQuery& q) const {
  auto rng = position_rng(seed_, position, kProtectStream);
  return obfuscate(q.query, k_, *store_, rng);
}

PrecisionRecall measure_accuracy(const MockCorpus& corpus, const ObfuscatedQuery& oq,
                                 std::size_t per_query_limit) {
  MockEngine engine(corpus, per_query_limit);
  std::vector<std::string> texts;
  for (const auto& q : oq.sub_queries) texts.push_back(q.raw());
  OrSearchOutcome outcome = search_or_simulated(engine, texts, per_query_limit);
  const std::vector<Query> decoys = oq.decoys();
  ResultSet kept = filter_results(oq.real(), decoys, outcome.results);
  return precision_recall(corpus.search(oq.real().raw(), per_query_limit), kept);
}

ExperimentReport run_experiment(const ExperimentInputs& inputs, const ExperimentConfig& cfg) {
  if (inputs.test.empty()) throw Error(ErrorKind::kInvalidInput, "empty test set");
  if (cfg.run_accuracy && !inputs.corpus) {
    throw Error(ErrorKind::kInvalidInput, "accuracy needs a corpus");
  }
  cfg.attack.validate();

  std::map<std::size_t, ExperimentRow> done;
  if (cfg.csv_path && std::filesystem::exists(*cfg.csv_path)) {
    std::ifstream in(*cfg.csv_path);
    if (!in) throw Error(ErrorKind::kIo, "cannot read " + cfg.csv_path->string());
    for (const auto& row : read_experiment_csv(in)) {
      if (row.seed != cfg.seed) {
        throw Error(ErrorKind::kInvalidInput,
                    cfg.csv_path->string() + " holds rows for seed " + std::to_string(row.seed));
      }
      done[row.k] = row;
    }
  }
  std::ofstream csv;
  if (cfg.csv_path) {
    const bool fresh = done.empty();
    csv.open(*cfg.csv_path, fresh ? std::ios::trunc : std::ios::app);
    if (!csv) throw Error(ErrorKind::kIo, "cannot write " + cfg.csv_path->string());
    if (fresh) csv << kExperimentCsvHeader << '\n' << std::flush;
  }

  const std::vector<LabeledQuery> test = label_queries(inputs.test);
  std::optional<SimAttack> attack;
  if (cfg.run_privacy) attack.emplace(build_profiles(inputs.train), cfg.attack);

  ExperimentReport report;
  for (std::size_t k : cfg.k_list) {
    if (auto it = done.find(k); it != done.end()) {
      report.rows.push_back(it->second);
      continue;
    }
    ExperimentRow row = run_one_k(inputs, test, attack ? &*attack : nullptr, k, cfg);
    report.rows.push_back(row);
    done[k] = row;
    if (csv.is_open()) {
      write_experiment_csv(csv, {row}, false);
      csv.flush();
    }
  }
  return report;
}

void write_experiment_csv(std::ostream& out, const std::vector<ExperimentRow>& rows,
                          bool header) {
  if (header) out << kExperimentCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.k << ',' << r.n_test << ',' << format_double(r.reident_rate) << ','
        << format_double(r.precision_mean) << ',' << format_double(r.recall_mean) << ','
        << r.n_accuracy_queries << ',' << r.seed << '\n';
  }
}

std::vector<ExperimentRow> read_experiment_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kExperimentCsvHeader) {
    throw Error(ErrorKind::kParse, "unexpected experiment CSV header");
  }
  std::vector<ExperimentRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string f[7];
    for (auto& field : f) {
      if (!std::getline(fields, field, ',')) {
        throw Error(ErrorKind::kParse, "short experiment CSV row: " + line);
      }
    }
    try {
      ExperimentRow r;
      r.k = std::stoull(f[0]);
      r.n_test = std::stoull(f[1]);
      r.reident_rate = std::stod(f[2]);
      r.precision_mean = std::stod(f[3]);
      r.recall_mean = std::stod(f[4]);
      r.n_accuracy_queries = std::stoull(f[5]);
      r.seed = std::stoull(f[6]);
      rows.push_back(r);
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::kParse, "bad experiment CSV row: " + line);
    }
  }
  return rows;
}

}  // namespace xsearch::eval
