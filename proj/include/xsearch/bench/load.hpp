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

// Open-loop load generator for a running proxy.

#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xsearch/attestation.hpp"

namespace xsearch::bench {

/// Where to send load and what to expect from its attestation.
struct LoadTarget {
  std::string addr;
  Digest measurement{};
  std::optional<Key32> platform_key;
};

struct LoadProfile {
  /// Offered requests per second, spread over all connections.
  double rate = 100.0;
  std::chrono::milliseconds duration{5'000};
  std::size_t connections = 4;
  /// Query texts drawn uniformly per request.
  std::vector<std::string> queries = {"private web search"};
  std::optional<std::uint8_t> k_override;
  /// Leading share of the run whose samples are discarded.
  double warmup_fraction = 0.1;
  /// How long to wait for stragglers once the schedule ends.
  std::chrono::milliseconds drain_timeout{2'000};
  /// Receive poll interval; also bounds how long a blocked receiver lingers.
  std::chrono::milliseconds poll_interval{200};
  /// Error share above which the run is reported invalid.
  double max_error_ratio = 0.1;
  std::uint64_t seed = 1;

  /// Throws Error(kInvalidInput).
  void validate() const;
};

/// Latencies are measured from the intended send time, so a stalled server
/// cannot hide queued requests (coordinated omission).
struct LatencyReport {
  double target_rate = 0.0;
  /// Successful responses per second over the measured window, never above
  /// target_rate.
  double achieved_rate = 0.0;
  std::size_t connections = 0;
  double duration_s = 0.0;
  std::uint64_t scheduled = 0;
  std::uint64_t completed = 0;
  std::uint64_t errors = 0;
  /// Samples behind the percentiles (post warm-up successes).
  std::uint64_t measured = 0;
  double p50_ms = 0.0;
  double p90_ms = 0.0;
  double p99_ms = 0.0;
  double p999_ms = 0.0;
  double max_ms = 0.0;
  double mean_ms = 0.0;
  /// p99 of actual minus intended send time.
  double send_lag_p99_ms = 0.0;
  bool valid = true;
  std::string note;
};

/// Connects and attests every session, then offers `rate` for `duration`.
/// An unreachable or unattestable target throws before any load is sent.
LatencyReport run_load(const LoadTarget& target, const LoadProfile& profile);

/// Runs each rate in order and stops after the first invalid report, which
/// is still included. Each row is written to `csv` as soon as it is known.
std::vector<LatencyReport> sweep_load(const LoadTarget& target, LoadProfile base,
                                      std::span<const double> rates,
                                      std::ostream* csv = nullptr);

/// A run is saturated when it is invalid, falls short of its target rate by
/// more than min_throughput_ratio, or exceeds max_p99_ms.
struct SaturationCriteria {
  double min_throughput_ratio = 0.95;
  double max_p99_ms = 100.0;
};

bool saturated(const LatencyReport& r, const SaturationCriteria& c = {});

/// Index of the first saturated row, if any.
std::optional<std::size_t> find_knee(std::span<const LatencyReport> rows,
                                     const SaturationCriteria& c = {});

inline constexpr const char* kLoadCsvHeader =
    "target_rate,achieved_rate,connections,duration_s,scheduled,completed,errors,"
    "p50_ms,p90_ms,p99_ms,p999_ms,max_ms,mean_ms,valid";

void write_load_csv_header(std::ostream& out);
void write_load_csv_row(std::ostream& out, const LatencyReport& r);
/// Reads what the writers produced; throws Error(kParse).
std::vector<LatencyReport> read_load_csv(std::istream& in);

}  // namespace xsearch::bench
