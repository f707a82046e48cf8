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

#include "xsearch/eval/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <unordered_map>

#include "xsearch/error.hpp"
#include "xsearch/history_store.hpp"
#include "xsearch/text.hpp"

namespace xsearch::eval {
namespace {

template <typename Int>
bool parse_int(std::string_view s, Int& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return c >= '0' && c <= '9';
  });
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> cols;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      cols.push_back(line.substr(start));
      return cols;
    }
    cols.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

bool is_header(std::string_view line) {
  return line.substr(0, 6) == "AnonID";
}

}  // namespace

std::int64_t parse_timestamp(std::string_view text) {
  text = trim(text);
  std::int64_t epoch = 0;
  if (text.find('-', 1) == std::string_view::npos) {
    if (!parse_int(text, epoch)) {
      throw Error(ErrorKind::kParse, "bad timestamp '" + std::string(text) + "'");
    }
    return epoch;
  }
  auto fail = [&]() -> std::int64_t {
    throw Error(ErrorKind::kParse, "bad timestamp '" + std::string(text) + "'");
  };
  if (text.size() < 10 || text[4] != '-' || text[7] != '-') return fail();
  int y = 0;
  unsigned mo = 0, d = 0, h = 0, mi = 0, s = 0;
  if (!all_digits(text.substr(0, 4)) || !all_digits(text.substr(5, 2)) ||
      !all_digits(text.substr(8, 2))) {
    return fail();
  }
  parse_int(text.substr(0, 4), y);
  parse_int(text.substr(5, 2), mo);
  parse_int(text.substr(8, 2), d);
  std::string_view rest = text.substr(10);
  if (!rest.empty()) {
    if (rest.back() == 'Z') rest.remove_suffix(1);
    if (rest.size() != 9 || (rest[0] != ' ' && rest[0] != 'T') || rest[3] != ':' ||
        rest[6] != ':' || !all_digits(rest.substr(1, 2)) ||
        !all_digits(rest.substr(4, 2)) || !all_digits(rest.substr(7, 2))) {
      return fail();
    }
    parse_int(rest.substr(1, 2), h);
    parse_int(rest.substr(4, 2), mi);
    parse_int(rest.substr(7, 2), s);
    if (h > 23 || mi > 59 || s > 60) return fail();
  }
  using namespace std::chrono;
  year_month_day ymd{year{y}, month{mo}, day{d}};
  if (!ymd.ok()) return fail();
  auto days = sys_days(ymd).time_since_epoch().count();
  return static_cast<std::int64_t>(days) * 86400 + h * 3600 + mi * 60 + s;
}

std::string format_timestamp(std::int64_t epoch_seconds) {
  using namespace std::chrono;
  const sys_seconds tp{seconds{epoch_seconds}};
  const sys_days day_point = floor<days>(tp);
  const year_month_day ymd{day_point};
  const hh_mm_ss hms{tp - day_point};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u %02d:%02d:%02d", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()),
                static_cast<int>(hms.hours().count()),
                static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

LogLoadResult parse_logs(std::istream& in) {
  LogLoadResult out;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (first && is_header(line)) {
      first = false;
      continue;
    }
    first = false;
    ++out.lines;
    auto cols = split_tabs(line);
    if (cols.size() < 3) {
      ++out.malformed;
      continue;
    }
    std::string_view id = trim(cols[0]);
    std::string_view query = trim(cols[1]);
    if (id.empty() || query.empty() || query.size() > HistoryStore::kMaxQueryBytes) {
      ++out.malformed;
      continue;
    }
    try {
      out.records.push_back({std::string(id), std::string(query), parse_timestamp(cols[2])});
    } catch (const Error&) {
      ++out.malformed;
    }
  }
  if (in.bad()) throw Error(ErrorKind::kIo, "read error in query log");
  if (out.malformed * 2 > out.lines) {
    throw Error(ErrorKind::kParse, std::to_string(out.malformed) + " of " +
                                       std::to_string(out.lines) +
                                       " log lines are malformed");
  }
  return out;
}

LogLoadResult load_logs(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  return parse_logs(in);
}

void write_logs(std::ostream& out, const std::vector<QueryLogRecord>& records) {
  out << "AnonID\tQuery\tQueryTime\n";
  for (const auto& r : records) {
    out << r.user_id << '\t' << r.query << '\t' << format_timestamp(r.timestamp) << '\n';
  }
}

void save_logs(const std::filesystem::path& path,
               const std::vector<QueryLogRecord>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  write_logs(out, records);
  if (!out.flush()) throw Error(ErrorKind::kIo, "write failed for " + path.string());
}

std::vector<QueryLogRecord> top_users(const std::vector<QueryLogRecord>& records,
                                      std::size_t n) {
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& r : records) ++counts[r.user_id];
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (ranked.size() > n) ranked.resize(n);
  std::unordered_map<std::string, bool> keep;
  for (const auto& [id, c] : ranked) keep[id] = true;
  std::vector<QueryLogRecord> out;
  for (const auto& r : records) {
    if (keep.contains(r.user_id)) out.push_back(r);
  }
  return out;
}

SplitResult split_train_test(const std::vector<QueryLogRecord>& records, SplitRatio ratio) {
  if (ratio.denominator == 0 || ratio.numerator == 0 || ratio.numerator > ratio.denominator) {
    throw Error(ErrorKind::kInvalidInput, "split ratio must lie in (0, 1]");
  }
  std::map<std::string, std::vector<QueryLogRecord>> by_user;
  for (const auto& r : records) by_user[r.user_id].push_back(r);
  SplitResult out;
  for (auto& [id, rows] : by_user) {
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
    const std::size_t n = rows.size();
    std::size_t n_train = (n * ratio.numerator + ratio.denominator - 1) / ratio.denominator;
    if (n < 3) {
      n_train = n;
      ++out.train_only_users;
    }
    for (std::size_t i = 0; i < n; ++i) {
      (i < n_train ? out.train : out.test).push_back(std::move(rows[i]));
    }
  }
  return out;
}

}  // namespace xsearch::eval
