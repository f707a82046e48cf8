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

#include <cstdio>
#include <random>

#include <gtest/gtest.h>

#include "xsearch/error.hpp"
#include "xsearch/url.hpp"

namespace xsearch {
namespace {

// Unreserved set spelled out as a table, escapes produced by snprintf.
std::string oracle_encode(const std::string& s) {
  static const std::string unreserved =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-._~";
  std::string out;
  for (unsigned char c : s) {
    if (unreserved.find(static_cast<char>(c)) != std::string::npos) {
      out += static_cast<char>(c);
    } else {
      char buf[4];
      std::snprintf(buf, sizeof(buf), "%%%02X", c);
      out += buf;
    }
  }
  return out;
}

TEST(PercentEncode, Example) { EXPECT_EQ(percent_encode("a b&c"), "a%20b%26c"); }

TEST(PercentEncode, MatchesOracleOnRandomBytes) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 2000; ++i) {
    std::string s(rng() % 30, '\0');
    for (auto& c : s) c = static_cast<char>(rng() & 0xFF);
    ASSERT_EQ(percent_encode(s), oracle_encode(s));
    ASSERT_EQ(percent_decode(percent_encode(s)), s);
  }
}

TEST(PercentDecode, RejectsBadEscapes) {
  EXPECT_FALSE(percent_decode("%").has_value());
  EXPECT_FALSE(percent_decode("abc%2").has_value());
  EXPECT_FALSE(percent_decode("%zz").has_value());
  EXPECT_EQ(percent_decode("a+b%2Bc"), "a+b+c");
}

TEST(ParseUrl, Components) {
  auto u = parse_http_url("http://example.org:8080/search?x=1");
  EXPECT_EQ(u.scheme, "http");
  EXPECT_EQ(u.host, "example.org");
  EXPECT_EQ(u.port, 8080);
  EXPECT_EQ(u.target, "/search?x=1");
  EXPECT_EQ(parse_http_url("https://h").target, "/");
  EXPECT_EQ(parse_http_url("https://h").port, 443);
  EXPECT_THROW(parse_http_url("ftp://h/"), Error);
  EXPECT_THROW(parse_http_url("http:///x"), Error);
}

TEST(QueryParam, FirstMatch) {
  EXPECT_EQ(query_param("http://a/b?x=1&u=two&u=3", "u"), "two");
  EXPECT_FALSE(query_param("http://a/b?xu=1", "u").has_value());
}

TEST(Sanitize, PlainUrlUnchanged) {
  ResultSet rs = {{"t", "d", "https://site.org/page"}};
  EXPECT_EQ(sanitize_results(rs, RedirectPolicy{}), rs);
}

TEST(Sanitize, UnwrapsRedirect) {
  ResultSet rs = {{"t", "d", "https://r.engine.example/rd?u=https%3A%2F%2Fsite.org%2Fpage"}};
  EXPECT_EQ(sanitize_results(rs, RedirectPolicy{})[0].url, "https://site.org/page");
}

TEST(Sanitize, DoublyEncodedTargetDecodesOnce) {
  const std::string target = "https://site.org/p?q=a b";
  const std::string once = percent_encode(target);
  const std::string twice = percent_encode(once);
  ResultSet rs = {{"t", "d", "https://r.engine.example/rd?u=" + twice}};
  EXPECT_EQ(sanitize_results(rs, RedirectPolicy{})[0].url, once);
}

TEST(Sanitize, UndecodableTargetFlaggedAndKept) {
  ResultSet rs = {{"a", "", "https://ok.example/"},
                  {"b", "", "https://r.engine.example/rd?u=http%3A%2F%2Fx%ZZ"}};
  std::vector<std::size_t> flagged;
  auto out = sanitize_results(rs, RedirectPolicy{}, &flagged);
  EXPECT_EQ(out, rs);
  EXPECT_EQ(flagged, std::vector<std::size_t>{1});
}

TEST(Sanitize, PrefixRestrictsUnwrapping) {
  RedirectPolicy policy{"u", "https://r.engine.example/rd"};
  ResultSet rs = {{"a", "", "https://other.example/rd?u=https%3A%2F%2Fx.org"},
                  {"b", "", "https://r.engine.example/rd?u=https%3A%2F%2Fy.org"}};
  auto out = sanitize_results(rs, policy);
  EXPECT_EQ(out[0].url, rs[0].url);
  EXPECT_EQ(out[1].url, "https://y.org");
}

}  // namespace
}  // namespace xsearch
