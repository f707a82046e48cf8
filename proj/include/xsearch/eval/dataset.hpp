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
#include <string>
#include <string_view>
#include <vector>

namespace xsearch::eval {

/// One row of a query log. The query is stored trimmed.
struct QueryLogRecord {
  std::string user_id;
  std::string query;
  /// Seconds since the Unix epoch, UTC.
  std::int64_t timestamp = 0;

  friend bool operator==(const QueryLogRecord&, const QueryLogRecord&) = default;
};

struct LogLoadResult {
  std::vector<QueryLogRecord> records;
  /// Non-blank data lines seen, excluding the header.
  std::size_t lines = 0;
  /// Lines skipped for a missing column, a blank id or query, an oversize
  /// query, or an unparsable timestamp.
  std::size_t malformed = 0;
};

/// Accepts epoch seconds or "YYYY-MM-DD[( |T)HH:MM:SS[Z]]" in UTC. Throws
/// Error(kParse).
std::int64_t parse_timestamp(std::string_view text);

/// "YYYY-MM-DD HH:MM:SS", the AOL export form.
std::string format_timestamp(std::int64_t epoch_seconds);

/// Tab-separated logs with at least AnonID, Query and QueryTime columns.
/// Extra columns (ItemRank, ClickURL) are ignored and a leading "AnonID"
/// header is skipped. Throws Error(kIo) when unreadable and Error(kParse)
/// when more than half of the data lines are malformed.
LogLoadResult load_logs(const std::filesystem::path& path);
LogLoadResult parse_logs(std::istream& in);

/// Writes the header and one row per record.
void write_logs(std::ostream& out, const std::vector<QueryLogRecord>& records);
void save_logs(const std::filesystem::path& path,
               const std::vector<QueryLogRecord>& records);

/// Records of the n users with the most rows, ties broken by user id. Input
/// order is preserved.
std::vector<QueryLogRecord> top_users(const std::vector<QueryLogRecord>& records,
                                      std::size_t n);

struct SplitRatio {
  std::size_t numerator = 2;
  std::size_t denominator = 3;
};

struct SplitResult {
  std::vector<QueryLogRecord> train;
  std::vector<QueryLogRecord> test;
  /// Users with fewer than three records; all of their rows went to train.
  std::size_t train_only_users = 0;
};

/// Per user, in timestamp order, the first ceil(n * ratio) records go to
/// train and the rest to test. Users are emitted in id order. Throws
/// Error(kInvalidInput) for a ratio outside (0, 1].
SplitResult split_train_test(const std::vector<QueryLogRecord>& records,
                             SplitRatio ratio = {});

}  // namespace xsearch::eval
