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

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <thread>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "xsearch/history_store.hpp"

namespace xsearch {
namespace {

using testing::chi_square_uniform_p;

std::vector<std::string> push_all(HistoryStore& s, int from, int to) {
  std::vector<std::string> pushed;
  for (int i = from; i <= to; ++i) {
    pushed.push_back("query " + std::to_string(i));
    s.push(Query(pushed.back()));
  }
  return pushed;
}

TEST(HistoryStore, PushToEmpty) {
  HistoryStore s(3);
  s.push(Query("q"));
  EXPECT_EQ(s.snapshot_len(), 1u);
  EXPECT_EQ(s.entries(), std::vector<std::string>{"q"});
}

TEST(HistoryStore, EvictsOldestWhenFull) {
  HistoryStore s(3);
  for (const char* q : {"q1", "q2", "q3", "q4"}) s.push(Query(q));
  EXPECT_EQ(s.entries(), (std::vector<std::string>{"q2", "q3", "q4"}));
}

TEST(HistoryStore, MatchesSlicingOracle) {
  HistoryStore s(100);
  auto pushed = push_all(s, 1, 1000);
  std::vector<std::string> oracle(pushed.end() - 100, pushed.end());
  EXPECT_EQ(s.entries(), oracle);
  EXPECT_EQ(s.entries().front(), "query 901");
}

TEST(HistoryStore, RandomPushSequencesMatchOracle) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t cap = 1 + rng() % 20;
    std::size_t n = rng() % 60;
    HistoryStore s(cap);
    std::vector<std::string> all;
    for (std::size_t i = 0; i < n; ++i) {
      all.push_back(testing::random_phrase(rng, 10, 1, 3));
      s.push(Query(all.back()));
    }
    std::size_t keep = std::min(cap, all.size());
    std::vector<std::string> oracle(all.end() - static_cast<std::ptrdiff_t>(keep), all.end());
    ASSERT_EQ(s.entries(), oracle);
  }
}

TEST(HistoryStore, LengthAndCapacity) {
  HistoryStore s(100);
  EXPECT_EQ(s.snapshot_len(), 0u);
  EXPECT_EQ(s.capacity(), 100u);
  push_all(s, 1, 5);
  EXPECT_EQ(s.snapshot_len(), 5u);
  push_all(s, 6, 150);
  EXPECT_EQ(s.snapshot_len(), 100u);
}

TEST(HistoryStore, RejectsZeroCapacityAndOversizeQueries) {
  EXPECT_THROW(HistoryStore(0), Error);
  HistoryStore s(4);
  EXPECT_NO_THROW(s.push(Query(std::string(HistoryStore::kMaxQueryBytes, 'a'))));
  EXPECT_THROW(s.push(Query(std::string(HistoryStore::kMaxQueryBytes + 1, 'a'))), Error);
}

TEST(HistoryStore, SampleZeroAndSingleEntry) {
  HistoryStore s(10);
  std::mt19937_64 rng(1);
  EXPECT_TRUE(s.sample(0, rng).empty());
  s.push(Query("only"));
  auto got = s.sample(3, rng);
  ASSERT_EQ(got.size(), 3u);
  for (const auto& q : got) EXPECT_EQ(q.raw(), "only");
}

TEST(HistoryStore, SampleFromEmptyIsDistinctError) {
  HistoryStore s(10);
  std::mt19937_64 rng(1);
  try {
    s.sample(1, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kHistoryEmpty);
  }
}

TEST(HistoryStore, SampleIsUniform) {
  HistoryStore s(4);
  for (const char* q : {"a", "b", "c", "d"}) s.push(Query(q));
  std::mt19937_64 rng(2024);
  std::map<std::string, std::size_t> freq;
  for (const auto& q : s.sample(40'000, rng)) ++freq[q.raw()];
  std::vector<std::size_t> counts;
  for (auto& [text, n] : freq) {
    double share = static_cast<double>(n) / 40'000.0;
    EXPECT_GE(share, 0.23) << text;
    EXPECT_LE(share, 0.27) << text;
    counts.push_back(n);
  }
  ASSERT_EQ(counts.size(), 4u);
  EXPECT_GT(chi_square_uniform_p(counts), 0.01);
}

TEST(HistoryStore, SampleOnlyReturnsCurrentEntries) {
  HistoryStore s(5);
  push_all(s, 1, 12);
  auto current = s.entries();
  std::mt19937_64 rng(5);
  for (const auto& q : s.sample(500, rng)) {
    EXPECT_NE(std::find(current.begin(), current.end(), q.raw()), current.end());
  }
}

// Writers push self-describing queries "wN-iM pad..." of a length derived
// from N and M; readers check every sample is whole and was pushed at some
// point, which rules out torn entries.
TEST(HistoryStore, ConcurrentPushAndSampleNeverTear) {
  HistoryStore s(64);
  s.push(Query("w0-i0"));
  std::atomic<bool> stop{false};
  std::atomic<std::size_t> bad{0};
  auto make = [](int w, int i) {
    std::string q = "w" + std::to_string(w) + "-i" + std::to_string(i);
    q.append(static_cast<std::size_t>((w * 31 + i) % 50), 'x');
    return q;
  };
  std::vector<std::thread> writers;
  for (int w = 1; w <= 3; ++w) {
    writers.emplace_back([&, w] {
      for (int i = 0; i < 20'000; ++i) s.push(Query(make(w, i)));
    });
  }
  std::vector<std::thread> readers;
  for (int r = 0; r < 3; ++r) {
    readers.emplace_back([&, r] {
      std::mt19937_64 rng(static_cast<unsigned>(r));
      while (!stop) {
        for (const auto& q : s.sample(8, rng)) {
          int w = -1, i = -1;
          if (std::sscanf(q.raw().c_str(), "w%d-i%d", &w, &i) != 2 ||
              (w != 0 && q.raw() != make(w, i))) {
            ++bad;
          }
        }
      }
    });
  }
  for (auto& t : writers) t.join();
  stop = true;
  for (auto& t : readers) t.join();
  EXPECT_EQ(bad.load(), 0u);
  EXPECT_EQ(s.snapshot_len(), 64u);
}

TEST(HistoryStore, SeedFileWarmStartInFileOrder) {
  auto path = std::filesystem::temp_directory_path() / "xsearch_seed_test.txt";
  {
    std::ofstream out(path);
    out << "first query\n\n   \nsecond query\n" << std::string(1001, 'z') << "\nthird\n";
  }
  HistoryStore s(10);
  EXPECT_EQ(s.load_seed_file(path), 3u);
  EXPECT_EQ(s.entries(), (std::vector<std::string>{"first query", "second query", "third"}));
  std::filesystem::remove(path);
  EXPECT_THROW(s.load_seed_file(path), Error);
}

TEST(HistoryStore, AccountedBytesGrowWithEntries) {
  HistoryStore s(1000);
  std::size_t empty = s.accounted_bytes();
  push_all(s, 1, 500);
  std::size_t half = s.accounted_bytes();
  EXPECT_GT(half, empty + 500 * 16);
}

}  // namespace
}  // namespace xsearch
