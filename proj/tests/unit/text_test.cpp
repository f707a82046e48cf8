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

#include <algorithm>
#include <cctype>
#include <random>
#include <regex>
#include <set>

#include <gtest/gtest.h>

#include "xsearch/error.hpp"
#include "xsearch/query.hpp"
#include "xsearch/text.hpp"

namespace xsearch {
namespace {

std::vector<std::string> terms(std::initializer_list<const char*> words) {
  return {words.begin(), words.end()};
}

// Independent splitter: lowercase, then regex-match runs of [a-z0-9].
std::vector<std::string> regex_tokens(const std::string& text) {
  std::string lower = text;
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) {
    return c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c);
  });
  static const std::regex word("[a-z0-9]+");
  std::set<std::string> found;
  for (auto it = std::sregex_iterator(lower.begin(), lower.end(), word);
       it != std::sregex_iterator(); ++it) {
    found.insert(it->str());
  }
  return {found.begin(), found.end()};
}

TEST(Tokenize, EmptyInput) { EXPECT_TRUE(tokenize("").empty()); }

TEST(Tokenize, CasefoldAndDedupe) {
  EXPECT_EQ(tokenize("Cheap FLIGHTS, cheap!").terms(), terms({"cheap", "flights"}));
}

TEST(Tokenize, NonAsciiBytesSeparate) {
  EXPECT_EQ(tokenize("caf\xC3\xA9 na\xC3\xAFve").terms(), terms({"caf", "na", "ve"}));
}

TEST(Tokenize, AgreesWithRegexOracle) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> len(0, 40);
  std::uniform_int_distribution<int> byte(0x20, 0x7E);
  for (int i = 0; i < 1000; ++i) {
    std::string s(static_cast<std::size_t>(len(rng)), ' ');
    for (auto& c : s) c = static_cast<char>(byte(rng));
    EXPECT_EQ(tokenize(s).terms(), regex_tokens(s)) << "input: " << s;
  }
}

TEST(TokenSet, IntersectionCountsDistinctTerms) {
  auto a = tokenize("red red car");
  auto b = tokenize("red car red");
  EXPECT_EQ(a.intersection_size(b), 2u);
  EXPECT_TRUE(a.contains("car"));
  EXPECT_FALSE(a.contains("bus"));
}

TEST(Trim, StripsAsciiWhitespace) {
  EXPECT_EQ(trim("  \t a b \n"), "a b");
  EXPECT_EQ(trim("   "), "");
}

TEST(QueryType, TrimsAndTokenizes) {
  Query q("  Jaguar Speed ");
  EXPECT_EQ(q.raw(), "Jaguar Speed");
  EXPECT_EQ(q.tokens(), tokenize("jaguar speed"));
}

TEST(QueryType, RejectsBlank) {
  try {
    Query q(" \t\n");
    FAIL() << "blank query accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidInput);
  }
}

}  // namespace
}  // namespace xsearch
