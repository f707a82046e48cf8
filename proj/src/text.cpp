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

#include "xsearch/text.hpp"

#include <algorithm>

#include "xsearch/error.hpp"
#include "xsearch/query.hpp"

namespace xsearch {

namespace {

bool is_word_byte(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9');
}

char lower(char c) { return (c >= 'A' && c <= 'Z') ? char(c - 'A' + 'a') : c; }

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

}  // namespace

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInput: return "invalid_input";
    case ErrorKind::kHistoryEmpty: return "history_empty";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kNetwork: return "network";
    case ErrorKind::kHttpStatus: return "http_status";
    case ErrorKind::kRateLimited: return "rate_limited";
    case ErrorKind::kBackend: return "backend";
    case ErrorKind::kProtocol: return "protocol";
    case ErrorKind::kReplay: return "replay";
    case ErrorKind::kAuthentication: return "authentication";
    case ErrorKind::kMeasurementMismatch: return "measurement_mismatch";
    case ErrorKind::kSignatureInvalid: return "signature_invalid";
  }
  return "unknown";
}

TokenSet TokenSet::from_terms(std::vector<std::string> terms) {
  TokenSet set;
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  set.terms_ = std::move(terms);
  return set;
}

bool TokenSet::contains(std::string_view term) const {
  return std::binary_search(terms_.begin(), terms_.end(), term);
}

std::size_t TokenSet::intersection_size(const TokenSet& other) const {
  std::size_t count = 0;
  auto a = terms_.begin();
  auto b = other.terms_.begin();
  while (a != terms_.end() && b != other.terms_.end()) {
    int cmp = a->compare(*b);
    if (cmp < 0) {
      ++a;
    } else if (cmp > 0) {
      ++b;
    } else {
      ++count;
      ++a;
      ++b;
    }
  }
  return count;
}

TokenSet tokenize(std::string_view text) {
  std::vector<std::string> terms;
  std::string current;
  for (char c : text) {
    if (is_word_byte(c)) {
      current.push_back(lower(c));
    } else if (!current.empty()) {
      terms.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) terms.push_back(std::move(current));
  return TokenSet::from_terms(std::move(terms));
}

std::string_view trim(std::string_view text) {
  while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
  while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
  return text;
}

Query::Query(std::string_view text) : raw_(trim(text)) {
  if (raw_.empty()) {
    throw Error(ErrorKind::kInvalidInput, "query is empty after trimming");
  }
  tokens_ = tokenize(raw_);
}

}  // namespace xsearch
