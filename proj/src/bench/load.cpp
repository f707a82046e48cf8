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

#include "xsearch/bench/load.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <deque>
#include <istream>
#include <memory>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>
#include <string_view>
#include <thread>

#include "xsearch/bench/histogram.hpp"
#include "xsearch/broker.hpp"
#include "xsearch/error.hpp"

namespace xsearch::bench {
namespace {

using Clock = std::chrono::steady_clock;

/// Connect and handshake may queue behind a previous run's backlog.
constexpr std::chrono::seconds kSetupTimeout{10};

bool is_poll_timeout(const Error& e) {
  return e.kind() == ErrorKind::kNetwork && std::string_view(e.what()) == "recv timed out";
}

/// Refusals the proxy reports in an error frame; the session stays usable.
bool is_request_error(const Error& e) {
  return e.kind() == ErrorKind::kBackend || e.kind() == ErrorKind::kInvalidInput ||
         e.kind() == ErrorKind::kRateLimited;
}

std::uint64_t to_us(Clock::duration d) {
  const auto us = std::chrono::duration_cast<std::chrono::microseconds>(d).count();
  return us < 0 ? 0 : static_cast<std::uint64_t>(us);
}

double us_to_ms(std::uint64_t us) { return static_cast<double>(us) / 1000.0; }

/// One attested session driven by a sender and a receiver thread.
struct Lane {
  explicit Lane(BrokerSession s) : session(std::move(s)) {}

  BrokerSession session;
  std::mutex mu;
  std::deque<Clock::time_point> inflight;
  std::atomic<bool> sender_done{false};
  std::atomic<bool> broken{false};

  // Sender-owned.
  std::uint64_t scheduled = 0;
  std::uint64_t send_errors = 0;
  LatencyHistogram send_lag;

  // Receiver-owned.
  std::uint64_t completed = 0;
  std::uint64_t in_window = 0;
  std::uint64_t recv_errors = 0;
  LatencyHistogram latency;
};

struct Schedule {
  Clock::time_point start;
  Clock::time_point warm;
  Clock::time_point end;
  Clock::time_point deadline;
  double rate = 0.0;
  std::size_t lanes = 0;
};

void send_loop(Lane& lane, std::size_t index, const Schedule& s, const LoadProfile& p) {
  std::mt19937_64 rng(p.seed * 0x9E3779B97F4A7C15ULL + index);
  std::uniform_int_distribution<std::size_t> pick(0, p.queries.size() - 1);
  for (std::uint64_t j = index;; j += s.lanes) {
    const auto offset = std::chrono::nanoseconds(
        std::llround(static_cast<double>(j) * 1e9 / s.rate));
    const Clock::time_point intended = s.start + offset;
    if (intended >= s.end) break;
    ++lane.scheduled;
    if (lane.broken.load()) {
      ++lane.send_errors;
      continue;
    }
    std::this_thread::sleep_until(intended);
    const std::string& text = p.queries[pick(rng)];
    {
      std::lock_guard lock(lane.mu);
      lane.inflight.push_back(intended);
    }
    const Clock::time_point actual = Clock::now();
    try {
      lane.session.send_query(text, p.k_override);
    } catch (const Error&) {
      lane.broken = true;
      std::lock_guard lock(lane.mu);
      lane.inflight.pop_back();
      ++lane.send_errors;
      continue;
    }
    if (intended >= s.warm) lane.send_lag.record(to_us(actual - intended));
  }
  lane.sender_done = true;
}

void receive_loop(Lane& lane, const Schedule& s) {
  while (Clock::now() < s.deadline) {
    {
      std::lock_guard lock(lane.mu);
      if (lane.sender_done.load() && lane.inflight.empty()) return;
    }
    bool ok = false;
    try {
      lane.session.receive_response();
      ok = true;
    } catch (const Error& e) {
      if (is_poll_timeout(e)) continue;
      if (!is_request_error(e)) {
        lane.broken = true;
        return;
      }
    }
    const Clock::time_point now = Clock::now();
    Clock::time_point intended;
    {
      std::lock_guard lock(lane.mu);
      if (lane.inflight.empty()) {
        // A reply nobody asked for: the stream is out of step.
        lane.broken = true;
        return;
      }
      intended = lane.inflight.front();
      lane.inflight.pop_front();
    }
    if (!ok) {
      ++lane.recv_errors;
      continue;
    }
    ++lane.completed;
    if (intended >= s.warm) lane.latency.record(to_us(now - intended));
    if (now >= s.warm && now <= s.end) ++lane.in_window;
  }
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

void LoadProfile::validate() const {
  auto bad = [](const std::string& what) { throw Error(ErrorKind::kInvalidInput, what); };
  if (!(rate > 0.0) || !std::isfinite(rate)) bad("rate must be positive");
  if (duration.count() <= 0) bad("duration must be positive");
  if (connections == 0) bad("need at least one connection");
  if (queries.empty()) bad("need at least one query text");
  if (!(warmup_fraction >= 0.0 && warmup_fraction < 1.0)) bad("warm-up must be in [0, 1)");
  if (drain_timeout.count() < 0) bad("drain timeout must not be negative");
  if (poll_interval.count() <= 0) bad("poll interval must be positive");
  if (!(max_error_ratio >= 0.0 && max_error_ratio <= 1.0)) bad("error ratio must be in [0, 1]");
}

LatencyReport run_load(const LoadTarget& target, const LoadProfile& profile) {
  profile.validate();

  std::vector<std::unique_ptr<Lane>> lanes;
  lanes.reserve(profile.connections);
  for (std::size_t i = 0; i < profile.connections; ++i) {
    auto transport = TcpTransport::connect(target.addr, kSetupTimeout);
    TcpTransport* tcp = transport.get();
    auto session = BrokerSession::connect_and_attest(std::move(transport), target.measurement,
                                                     target.platform_key);
    tcp->set_timeout(profile.poll_interval);
    lanes.push_back(std::make_unique<Lane>(std::move(session)));
  }

  Schedule s;
  s.rate = profile.rate;
  s.lanes = lanes.size();
  // A short lead time lets every thread reach its first sleep.
  s.start = Clock::now() + std::chrono::milliseconds(20);
  const auto total = std::chrono::duration_cast<Clock::duration>(profile.duration);
  s.warm = s.start + std::chrono::duration_cast<Clock::duration>(total * profile.warmup_fraction);
  s.end = s.start + total;
  s.deadline = s.end + profile.drain_timeout;

  std::vector<std::thread> threads;
  threads.reserve(2 * lanes.size());
  for (std::size_t i = 0; i < lanes.size(); ++i) {
    Lane& lane = *lanes[i];
    threads.emplace_back([&lane, i, &s, &profile] { send_loop(lane, i, s, profile); });
    threads.emplace_back([&lane, &s] { receive_loop(lane, s); });
  }
  for (auto& t : threads) t.join();

  LatencyReport r;
  r.target_rate = profile.rate;
  r.connections = lanes.size();
  r.duration_s = std::chrono::duration<double>(profile.duration).count();
  LatencyHistogram latency, lag;
  std::uint64_t in_window = 0;
  for (auto& lane : lanes) {
    std::lock_guard lock(lane->mu);
    r.scheduled += lane->scheduled;
    r.completed += lane->completed;
    r.errors += lane->send_errors + lane->recv_errors + lane->inflight.size();
    in_window += lane->in_window;
    latency.merge(lane->latency);
    lag.merge(lane->send_lag);
    lane->session.close();
  }
  r.measured = latency.count();
  r.p50_ms = us_to_ms(latency.value_at_percentile(50.0));
  r.p90_ms = us_to_ms(latency.value_at_percentile(90.0));
  r.p99_ms = us_to_ms(latency.value_at_percentile(99.0));
  r.p999_ms = us_to_ms(latency.value_at_percentile(99.9));
  r.max_ms = us_to_ms(latency.max());
  r.mean_ms = latency.mean() / 1000.0;
  r.send_lag_p99_ms = us_to_ms(lag.value_at_percentile(99.0));

  const double window_s = std::chrono::duration<double>(s.end - s.warm).count();
  if (window_s > 0.0) {
    r.achieved_rate = std::min(profile.rate, static_cast<double>(in_window) / window_s);
  }
  const double error_ratio =
      r.scheduled ? static_cast<double>(r.errors) / static_cast<double>(r.scheduled) : 0.0;
  if (r.scheduled == 0) {
    r.valid = false;
    r.note = "no requests fit in the run";
  } else if (error_ratio > profile.max_error_ratio) {
    r.valid = false;
    r.note = std::to_string(r.errors) + " of " + std::to_string(r.scheduled) +
             " requests failed";
  }
  return r;
}

std::vector<LatencyReport> sweep_load(const LoadTarget& target, LoadProfile base,
                                      std::span<const double> rates, std::ostream* csv) {
  if (rates.empty()) throw Error(ErrorKind::kInvalidInput, "no rates to sweep");
  if (csv) {
    write_load_csv_header(*csv);
    csv->flush();
  }
  std::vector<LatencyReport> rows;
  for (double rate : rates) {
    base.rate = rate;
    rows.push_back(run_load(target, base));
    if (csv) {
      write_load_csv_row(*csv, rows.back());
      csv->flush();
    }
    if (!rows.back().valid) break;
  }
  return rows;
}

bool saturated(const LatencyReport& r, const SaturationCriteria& c) {
  return !r.valid || r.achieved_rate < c.min_throughput_ratio * r.target_rate ||
         r.p99_ms > c.max_p99_ms;
}

std::optional<std::size_t> find_knee(std::span<const LatencyReport> rows,
                                     const SaturationCriteria& c) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (saturated(rows[i], c)) return i;
  }
  return std::nullopt;
}

void write_load_csv_header(std::ostream& out) { out << kLoadCsvHeader << '\n'; }

void write_load_csv_row(std::ostream& out, const LatencyReport& r) {
  out << format_double(r.target_rate) << ',' << format_double(r.achieved_rate) << ','
      << r.connections << ',' << format_double(r.duration_s) << ',' << r.scheduled << ','
      << r.completed << ',' << r.errors << ',' << format_double(r.p50_ms) << ','
      << format_double(r.p90_ms) << ',' << format_double(r.p99_ms) << ','
      << format_double(r.p999_ms) << ',' << format_double(r.max_ms) << ','
      << format_double(r.mean_ms) << ',' << (r.valid ? 1 : 0) << '\n';
}

std::vector<LatencyReport> read_load_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kLoadCsvHeader) {
    throw Error(ErrorKind::kParse, "unexpected load CSV header");
  }
  std::vector<LatencyReport> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string f[14];
    for (auto& field : f) {
      if (!std::getline(fields, field, ',')) {
        throw Error(ErrorKind::kParse, "short load CSV row: " + line);
      }
    }
    try {
      LatencyReport r;
      r.target_rate = std::stod(f[0]);
      r.achieved_rate = std::stod(f[1]);
      r.connections = std::stoull(f[2]);
      r.duration_s = std::stod(f[3]);
      r.scheduled = std::stoull(f[4]);
      r.completed = std::stoull(f[5]);
      r.errors = std::stoull(f[6]);
      r.p50_ms = std::stod(f[7]);
      r.p90_ms = std::stod(f[8]);
      r.p99_ms = std::stod(f[9]);
      r.p999_ms = std::stod(f[10]);
      r.max_ms = std::stod(f[11]);
      r.mean_ms = std::stod(f[12]);
      r.valid = f[13] == "1";
      rows.push_back(r);
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::kParse, "bad load CSV row: " + line);
    }
  }
  return rows;
}

}  // namespace xsearch::bench
