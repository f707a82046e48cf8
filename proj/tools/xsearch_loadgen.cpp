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

// xsearch-loadgen: open-loop load against a proxy, plus the memory probe.

#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "tool_common.hpp"
#include "xsearch/bench/load.hpp"
#include "xsearch/bench/memory_probe.hpp"
#include "xsearch/error.hpp"

namespace {

using namespace xsearch;
using namespace xsearch::bench;

void print_report(const LatencyReport& r) {
  std::printf("rate %.0f/s achieved %.1f/s  p50 %.3f  p90 %.3f  p99 %.3f  p999 %.3f ms  "
              "errors %llu/%llu%s%s\n",
              r.target_rate, r.achieved_rate, r.p50_ms, r.p90_ms, r.p99_ms, r.p999_ms,
              static_cast<unsigned long long>(r.errors),
              static_cast<unsigned long long>(r.scheduled), r.valid ? "" : "  INVALID: ",
              r.note.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Load generator and memory probe"};
  app.require_subcommand(1);

  LoadTarget target;
  LoadProfile profile;
  std::string measurement_hex;
  std::string platform_key_hex;
  double duration_s = 5.0;
  int k = -1;
  std::string rates_text;
  std::string csv_path;
  std::vector<std::string> queries;

  auto add_load = [&](CLI::App* sub) {
    sub->add_option("--target", target.addr, "Proxy address host:port")->required();
    sub->add_option("--measurement", measurement_hex, "Expected measurement (64 hex)")
        ->required();
    sub->add_option("--platform-key", platform_key_hex, "Pin the platform key (64 hex)");
    sub->add_option("--duration", duration_s, "Seconds per run")->check(CLI::PositiveNumber);
    sub->add_option("--connections", profile.connections, "Sessions to spread load over")
        ->check(CLI::PositiveNumber);
    sub->add_option("--k", k, "Per-request decoy count")->check(CLI::Range(0, 254));
    sub->add_option("--query", queries, "Query text (repeatable)");
    sub->add_option("--csv", csv_path, "CSV output");
  };
  auto* run = app.add_subcommand("run", "One fixed-rate run");
  add_load(run);
  run->add_option("--rate", profile.rate, "Requests per second")->check(CLI::PositiveNumber);
  auto* sweep = app.add_subcommand("sweep", "Increasing rates until saturation");
  add_load(sweep);
  sweep->add_option("--rates", rates_text, "Comma-separated rates")->required();

  std::size_t n = 1'000'000;
  std::string len_dist = "aol-like";
  std::uint64_t seed = 1;
  auto* memory = app.add_subcommand("memory", "History store footprint");
  memory->add_option("--n", n, "Entries")->check(CLI::PositiveNumber);
  memory->add_option("--len-dist", len_dist, "fixed:N or aol-like");
  memory->add_option("--seed", seed);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*memory) {
      MemoryReport r = memory_probe(n, LengthDistribution::parse(len_dist), seed);
      std::printf("entries %zu mean_query_bytes %.2f accounted_bytes %zu (%.2f MiB) "
                  "bytes_per_entry %.2f",
                  r.entries, r.mean_query_bytes, r.accounted_bytes, r.accounted_mib(),
                  static_cast<double>(r.accounted_bytes) / static_cast<double>(r.entries));
      if (r.heap_delta_bytes) std::printf(" heap_delta_bytes %zu", *r.heap_delta_bytes);
      std::printf("\n");
      return 0;
    }

    target.measurement = digest_from_hex(measurement_hex);
    target.platform_key = tools::optional_key(platform_key_hex);
    profile.duration = std::chrono::milliseconds(static_cast<long long>(duration_s * 1000));
    if (k >= 0) profile.k_override = static_cast<std::uint8_t>(k);
    if (!queries.empty()) profile.queries = queries;

    std::ofstream csv;
    if (!csv_path.empty()) {
      csv.open(csv_path);
      if (!csv) throw Error(ErrorKind::kIo, "cannot write " + csv_path);
    }
    if (*run) {
      LatencyReport r = run_load(target, profile);
      print_report(r);
      if (csv.is_open()) {
        write_load_csv_header(csv);
        write_load_csv_row(csv, r);
      }
      return r.valid ? 0 : 1;
    }
    std::vector<double> rates;
    for (const auto& f : tools::split_list(rates_text)) rates.push_back(std::stod(f));
    auto rows = sweep_load(target, profile, rates, csv.is_open() ? &csv : nullptr);
    for (const auto& r : rows) print_report(r);
    if (auto knee = find_knee(rows)) {
      std::printf("saturation at %.0f req/s\n", rows[*knee].target_rate);
    } else {
      std::printf("no saturation up to %.0f req/s\n", rows.back().target_rate);
    }
    return 0;
  } catch (const Error& e) {
    std::cerr << "xsearch-loadgen: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return 1;
  } catch (const std::logic_error& e) {
    std::cerr << "xsearch-loadgen: bad number: " << e.what() << '\n';
    return 2;
  }
}
