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

// xsearch-eval: dataset preparation and privacy/accuracy experiments.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tool_common.hpp"
#include "xsearch/error.hpp"
#include "xsearch/eval/dataset.hpp"
#include "xsearch/eval/experiment.hpp"
#include "xsearch/eval/synthetic.hpp"

namespace {

using namespace xsearch;
using namespace xsearch::eval;

struct Options {
  std::string input;
  std::string output;
  std::string train = "train.tsv";
  std::string test = "test.tsv";
  std::string corpus;
  std::string csv;
  std::string k_list = "0,1,3,7";
  std::uint64_t seed = 1;
  std::size_t top_users = 0;
  std::size_t sample_size = 100;
  double alpha = 0.5;
  SyntheticConfig synth;
  TopicCorpusConfig topics;
};

std::vector<std::size_t> parse_k_list(const std::string& text) {
  std::vector<std::size_t> ks;
  for (const auto& f : tools::split_list(text)) {
    try {
      ks.push_back(std::stoull(f));
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::kInvalidInput, "bad --k-list entry '" + f + "'");
    }
  }
  if (ks.empty()) throw Error(ErrorKind::kInvalidInput, "--k-list is empty");
  return ks;
}

std::vector<QueryLogRecord> load_clean(const std::string& path) {
  LogLoadResult r = load_logs(path);
  if (r.malformed > 0) {
    std::cerr << path << ": skipped " << r.malformed << " malformed of " << r.lines << " lines\n";
  }
  return r.records;
}

void run_sweep(const Options& o, bool privacy, bool accuracy) {
  ExperimentInputs in;
  in.train = load_clean(o.train);
  in.test = load_clean(o.test);
  if (accuracy) {
    if (o.corpus.empty()) throw Error(ErrorKind::kInvalidInput, "--corpus is required");
    std::ifstream f(o.corpus);
    if (!f) throw Error(ErrorKind::kIo, "cannot read " + o.corpus);
    try {
      in.corpus = MockCorpus(results_from_json(nlohmann::json::parse(f)));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kParse, o.corpus + ": " + e.what());
    }
  }
  ExperimentConfig cfg;
  cfg.k_list = parse_k_list(o.k_list);
  cfg.seed = o.seed;
  cfg.sample_size = o.sample_size;
  cfg.run_privacy = privacy;
  cfg.run_accuracy = accuracy;
  cfg.attack.alpha = o.alpha;
  if (!o.csv.empty()) cfg.csv_path = o.csv;
  ExperimentReport report = run_experiment(in, cfg);
  write_experiment_csv(std::cout, report.rows);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Privacy and accuracy experiments"};
  app.require_subcommand(1);
  Options o;

  auto* ingest = app.add_subcommand("ingest", "Validate a query log and keep the busiest users");
  ingest->add_option("-i,--input", o.input, "AOL-format TSV log")->required();
  ingest->add_option("-o,--output", o.output, "Cleaned TSV")->required();
  ingest->add_option("--top-users", o.top_users, "Keep the N most active users (0 keeps all)");

  auto* split = app.add_subcommand("split", "Per-user chronological two-thirds split");
  split->add_option("-i,--input", o.input, "Cleaned TSV")->required();
  split->add_option("--train", o.train, "Training output");
  split->add_option("--test", o.test, "Test output");

  auto add_experiment = [&](CLI::App* sub, bool needs_corpus) {
    sub->add_option("--train", o.train, "Training log");
    sub->add_option("--test", o.test, "Test log");
    sub->add_option("--k-list", o.k_list, "Comma-separated decoy counts");
    sub->add_option("--seed", o.seed, "Experiment seed");
    sub->add_option("--csv", o.csv, "Resumable CSV output");
    sub->add_option("--alpha", o.alpha, "Smoothing factor of the attack");
    if (needs_corpus) {
      sub->add_option("--corpus", o.corpus, "Mock corpus JSON")->required();
      sub->add_option("--sample-size", o.sample_size, "Queries sampled per k");
    }
  };
  auto* attack = app.add_subcommand("attack", "Re-identification rate per k");
  add_experiment(attack, false);
  auto* accuracy = app.add_subcommand("accuracy", "Precision and recall per k");
  add_experiment(accuracy, true);
  auto* sweep = app.add_subcommand("sweep", "Both measurements per k");
  add_experiment(sweep, true);

  auto* synth = app.add_subcommand("synth", "Write a clustered synthetic log and topic corpus");
  synth->add_option("-o,--output", o.output, "Log output")->required();
  synth->add_option("--corpus", o.corpus, "Corpus JSON output");
  synth->add_option("--users", o.synth.users);
  synth->add_option("--queries-per-user", o.synth.queries_per_user);
  synth->add_option("--vocab-per-user", o.synth.vocab_per_user);
  synth->add_option("--terms-per-query", o.synth.terms_per_query);
  synth->add_option("--overlap", o.synth.overlap);
  synth->add_option("--topics", o.topics.topics);
  synth->add_option("--seed", o.seed);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) {
      LogLoadResult r = load_logs(o.input);
      auto rows = o.top_users ? top_users(r.records, o.top_users) : r.records;
      save_logs(o.output, rows);
      std::cout << "lines " << r.lines << " malformed " << r.malformed << " kept "
                << rows.size() << '\n';
    } else if (*split) {
      SplitResult s = split_train_test(load_clean(o.input));
      save_logs(o.train, s.train);
      save_logs(o.test, s.test);
      std::cout << "train " << s.train.size() << " test " << s.test.size()
                << " train_only_users " << s.train_only_users << '\n';
    } else if (*attack) {
      run_sweep(o, true, false);
    } else if (*accuracy) {
      run_sweep(o, false, true);
    } else if (*sweep) {
      run_sweep(o, true, true);
    } else if (*synth) {
      o.synth.seed = o.seed;
      o.topics.seed = o.seed;
      SyntheticDataset data = generate_clustered_dataset(o.synth);
      save_logs(o.output, data.records);
      if (!o.corpus.empty()) {
        std::ofstream f(o.corpus);
        if (!f) throw Error(ErrorKind::kIo, "cannot write " + o.corpus);
        f << to_json(generate_topic_corpus(data, o.topics)).dump(1) << '\n';
      }
      std::cout << "records " << data.records.size() << '\n';
    }
    return 0;
  } catch (const Error& e) {
    std::cerr << "xsearch-eval: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return 1;
  }
}
