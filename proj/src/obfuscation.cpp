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

#include "xsearch/obfuscation.hpp"

namespace xsearch {

namespace {

constexpr std::string_view kSeparator = " OR ";

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool has_standalone_or(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (text.substr(start, i - start) == "OR") return true;
  }
  return false;
}

bool needs_quoting(std::string_view text) {
  return (!text.empty() && text.front() == '"') || has_standalone_or(text);
}

void append_quoted(std::string& out, std::string_view text) {
  out.push_back('"');
  for (char c : text) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
}

}  // namespace

std::vector<Query> ObfuscatedQuery::decoys() const {
  std::vector<Query> out;
  for (std::size_t i = 0; i < sub_queries.size(); ++i) {
    if (i != real_index) out.push_back(sub_queries[i]);
  }
  return out;
}

std::string serialize_or_query(std::span<const std::string> sub_queries) {
  std::string out;
  for (std::size_t i = 0; i < sub_queries.size(); ++i) {
    if (i > 0) out.append(kSeparator);
    if (needs_quoting(sub_queries[i])) {
      append_quoted(out, sub_queries[i]);
    } else {
      out.append(sub_queries[i]);
    }
  }
  return out;
}

std::string serialize(const ObfuscatedQuery& oq) {
  std::vector<std::string> texts;
  texts.reserve(oq.sub_queries.size());
  for (const Query& q : oq.sub_queries) texts.push_back(q.raw());
  return serialize_or_query(texts);
}

std::vector<std::string> parse_or_query(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    std::string item;
    if (pos < text.size() && text[pos] == '"') {
      ++pos;
      bool closed = false;
      while (pos < text.size()) {
        if (text[pos] == '"') {
          if (pos + 1 < text.size() && text[pos + 1] == '"') {
            item.push_back('"');
            pos += 2;
            continue;
          }
          ++pos;
          closed = true;
          break;
        }
        item.push_back(text[pos++]);
      }
      if (!closed) throw Error(ErrorKind::kParse, "unterminated quoted sub-query");
      out.push_back(std::move(item));
      if (pos == text.size()) return out;
      if (text.substr(pos, kSeparator.size()) != kSeparator) {
        throw Error(ErrorKind::kParse, "expected OR after quoted sub-query");
      }
      pos += kSeparator.size();
    } else {
      std::size_t next = text.find(kSeparator, pos);
      std::string_view piece = text.substr(pos, next == std::string_view::npos
                                                    ? std::string_view::npos
                                                    : next - pos);
      if (piece.empty()) throw Error(ErrorKind::kParse, "empty sub-query");
      out.emplace_back(piece);
      if (next == std::string_view::npos) return out;
      pos = next + kSeparator.size();
    }
  }
}

}  // namespace xsearch
