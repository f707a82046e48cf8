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
#include <memory>
#include <random>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "xsearch/obfuscation.hpp"

namespace xsearch {
namespace {

using testing::chi_square_uniform_p;

std::unique_ptr<HistoryStore> seeded_store(std::initializer_list<const char*> queries,
                                           std::size_t cap = 100) {
  auto s = std::make_unique<HistoryStore>(cap);
  for (const char* q : queries) s->push(Query(q));
  return s;
}

std::vector<std::string> raws(const ObfuscatedQuery& oq) {
  std::vector<std::string> out;
  for (const auto& q : oq.sub_queries) out.push_back(q.raw());
  return out;
}

TEST(Obfuscate, KZeroIsIdentity) {
  auto store_ptr = seeded_store({"a", "b"});
  auto& store = *store_ptr;
  std::mt19937_64 rng(1);
  auto oq = obfuscate(Query("real"), 0, store, rng);
  EXPECT_EQ(raws(oq), std::vector<std::string>{"real"});
  EXPECT_EQ(oq.real_index, 0u);
  EXPECT_EQ(oq.k_effective, 0u);
  EXPECT_FALSE(oq.degraded);
}

TEST(Obfuscate, EmptyHistoryDegrades) {
  HistoryStore store(10);
  std::mt19937_64 rng(1);
  auto oq = obfuscate(Query("first ever"), 3, store, rng);
  EXPECT_EQ(raws(oq), std::vector<std::string>{"first ever"});
  EXPECT_EQ(oq.k_effective, 0u);
  EXPECT_TRUE(oq.degraded);
  EXPECT_EQ(store.entries(), std::vector<std::string>{"first ever"});
}

TEST(Obfuscate, ShapeAndPushAfterSampling) {
  auto store_ptr = seeded_store({"alpha", "beta", "gamma"});
  auto& store = *store_ptr;
  std::mt19937_64 rng(9);
  for (int i = 0; i < 200; ++i) {
    const auto before = store.entries();
    const std::string text = "fresh query " + std::to_string(i);
    auto oq = obfuscate(Query(text), 4, store, rng);
    ASSERT_EQ(oq.sub_queries.size(), oq.k_effective + 1);
    ASSERT_EQ(oq.k_effective, 4u);
    ASSERT_LT(oq.real_index, oq.sub_queries.size());
    EXPECT_EQ(oq.real().raw(), text);
    for (const auto& d : oq.decoys()) {
      // Every decoy came from the pre-call window, never the new query.
      EXPECT_NE(std::find(before.begin(), before.end(), d.raw()), before.end());
      EXPECT_NE(d.raw(), text);
    }
    EXPECT_EQ(store.entries().back(), text);
  }
}

TEST(Obfuscate, RealIndexUniformForK2) {
  auto store_ptr = seeded_store({"a", "b", "c", "d", "e"}, 5);
  auto& store = *store_ptr;
  std::vector<std::size_t> counts(3, 0);
  std::mt19937_64 seeds(77);
  for (int run = 0; run < 30'000; ++run) {
    std::mt19937_64 rng(seeds());
    auto oq = obfuscate(Query("q"), 2, store, rng);
    ++counts.at(oq.real_index);
  }
  for (auto c : counts) {
    double share = static_cast<double>(c) / 30'000.0;
    EXPECT_GE(share, 0.30);
    EXPECT_LE(share, 0.37);
  }
  EXPECT_GT(chi_square_uniform_p(counts), 0.01);
}

TEST(Obfuscate, DecoysForSmallerKArePrefix) {
  auto store_a_ptr = seeded_store({"a", "b", "c", "d", "e", "f", "g"});
  auto& store_a = *store_a_ptr;
  auto store_b_ptr = seeded_store({"a", "b", "c", "d", "e", "f", "g"});
  auto& store_b = *store_b_ptr;
  std::mt19937_64 r1(5), r2(5);
  auto small = obfuscate(Query("q"), 2, store_a, r1);
  auto big = obfuscate(Query("q"), 5, store_b, r2);
  auto ds = small.decoys();
  auto db = big.decoys();
  ASSERT_EQ(ds.size(), 2u);
  EXPECT_EQ(ds[0], db[0]);
  EXPECT_EQ(ds[1], db[1]);
}

TEST(Obfuscate, RejectsOversizeQuery) {
  auto store_ptr = seeded_store({"a"});
  auto& store = *store_ptr;
  std::mt19937_64 rng(1);
  EXPECT_THROW(obfuscate(Query(std::string(1001, 'x')), 1, store, rng), Error);
  EXPECT_EQ(store.snapshot_len(), 1u);
}

TEST(Serialize, SingleQueryIsIdentity) {
  ObfuscatedQuery oq;
  oq.sub_queries = {Query("cheap flights")};
  EXPECT_EQ(serialize(oq), "cheap flights");
}

TEST(Serialize, JoinsWithOr) {
  ObfuscatedQuery oq;
  oq.sub_queries = {Query("cheap flights"), Query("jaguar habitat"), Query("sgx enclave")};
  oq.real_index = 1;
  oq.k_effective = 2;
  EXPECT_EQ(serialize(oq), "cheap flights OR jaguar habitat OR sgx enclave");
}

TEST(Serialize, QuotesSubQueriesContainingOr) {
  std::vector<std::string> subs = {"black OR white", "say \"hi\" OR bye", "orange"};
  auto text = serialize_or_query(subs);
  EXPECT_EQ(text, "\"black OR white\" OR \"say \"\"hi\"\" OR bye\" OR orange");
  EXPECT_EQ(parse_or_query(text), subs);
}

TEST(Parse, SimpleForms) {
  EXPECT_EQ(parse_or_query("a OR b"), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(parse_or_query("a"), std::vector<std::string>{"a"});
}

TEST(Parse, MalformedQuotingIsError) {
  for (const char* bad : {"\"unterminated OR x", "\"a\"b OR c", "a OR ", "a OR \"x"}) {
    EXPECT_THROW(parse_or_query(bad), Error) << bad;
  }
}

// Texts built from a vocabulary rich in separators, quotes and OR tokens.
std::string tricky_text(std::mt19937_64& rng) {
  static const std::vector<std::string> parts = {
      "OR", "or", "Or", "\"", "\"\"", "a", "b", "ORx", "xOR", "OR\"", "\"OR", "flights", "x y"};
  std::uniform_int_distribution<std::size_t> pick(0, parts.size() - 1);
  std::uniform_int_distribution<int> len(1, 5);
  std::string out;
  for (int i = 0, n = len(rng); i < n; ++i) {
    if (!out.empty()) out += ' ';
    out += parts[pick(rng)];
  }
  return std::string(trim(out));
}

TEST(Serialize, RoundTripOnRandomHistoryQueries) {
  std::mt19937_64 rng(2);
  HistoryStore store(5000);
  for (int i = 0; i < 3000; ++i) {
    std::string t = (i % 2) ? tricky_text(rng) : testing::random_phrase(rng, 50, 1, 4);
    if (!trim(t).empty()) store.push(Query(t));
  }
  for (int i = 0; i < 1000; ++i) {
    auto oq = obfuscate(Query(tricky_text(rng)), 1 + i % 7, store, rng);
    ASSERT_EQ(parse_or_query(serialize(oq)), raws(oq)) << serialize(oq);
  }
}

TEST(Serialize, RoundTripOnRandomLists) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 1000; ++i) {
    std::vector<std::string> subs;
    for (int j = 0, n = 1 + static_cast<int>(rng() % 8); j < n; ++j) {
      std::string t = tricky_text(rng);
      if (!t.empty()) subs.push_back(t);
    }
    if (subs.empty()) continue;
    ASSERT_EQ(parse_or_query(serialize_or_query(subs)), subs);
  }
}

}  // namespace
}  // namespace xsearch
