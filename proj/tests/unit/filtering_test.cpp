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
#include <random>

#include <gtest/gtest.h>

#include "brute_force_filter.hpp"
#include "test_support.hpp"
#include "xsearch/filtering.hpp"

namespace xsearch {
namespace {

TEST(CommonWords, Examples) {
  EXPECT_EQ(nb_common_words(Query("jaguar speed"), "The jaguar's top speed"), 2u);
  EXPECT_EQ(nb_common_words(Query("apple pie"), "quantum physics"), 0u);
  EXPECT_EQ(nb_common_words(Query("red red car"), "red car red"), 2u);
}

TEST(Filter, NoDecoysKeepsEverything) {
  ResultSet rs = {{"x", "y", "http://a"}, {"", "", "http://b"}};
  EXPECT_EQ(filter_results(Query("anything"), {}, rs), rs);
}

TEST(Filter, HandEvaluatedExample) {
  Query real("jaguar speed");
  std::vector<Query> decoys = {Query("chocolate cake recipe")};
  SearchResult jaguar{"How fast is a jaguar", "top speed of the jaguar", "http://j"};
  SearchResult cake{"Best chocolate cake", "easy cake recipe", "http://c"};
  EXPECT_EQ(score_result(real, decoys, jaguar), (ScoreVector{3, 0}));
  EXPECT_EQ(score_result(real, decoys, cake), (ScoreVector{0, 4}));
  EXPECT_EQ(filter_results(real, decoys, {jaguar, cake}), ResultSet{jaguar});
}

TEST(Filter, AllZeroScoresKeep) {
  SearchResult r{"nothing", "relevant", "http://z"};
  EXPECT_EQ(filter_results(Query("alpha"), std::vector<Query>{Query("beta")}, {r}),
            ResultSet{r});
}

TEST(Filter, TieWithDecoyKeeps) {
  SearchResult r{"alpha beta", "", "http://t"};
  EXPECT_EQ(filter_results(Query("alpha"), std::vector<Query>{Query("beta")}, {r}),
            ResultSet{r});
}

TEST(Filter, UrlIsNotScored) {
  SearchResult r{"", "", "http://decoy-word.example/decoy"};
  EXPECT_EQ(filter_results(Query("real"), std::vector<Query>{Query("decoy")}, {r}),
            ResultSet{r});
}

struct Instance {
  Query real;
  std::vector<Query> decoys;
  ResultSet results;
};

Instance random_instance(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> vocab_d(1, 50), subs_d(1, 8), res_d(0, 30);
  const std::size_t vocab = vocab_d(rng);
  const std::size_t subs = subs_d(rng);
  Instance inst{Query(testing::random_phrase(rng, vocab, 1, 4)), {}, {}};
  for (std::size_t i = 1; i < subs; ++i) {
    inst.decoys.emplace_back(testing::random_phrase(rng, vocab, 1, 4));
  }
  for (std::size_t i = 0, n = res_d(rng); i < n; ++i) {
    inst.results.push_back({testing::random_phrase(rng, vocab, 0, 6),
                            testing::random_phrase(rng, vocab, 0, 10),
                            "http://r" + std::to_string(i)});
  }
  return inst;
}

TEST(Filter, MatchesBruteForceOracle) {
  std::mt19937_64 rng(31337);
  for (int i = 0; i < 10'000; ++i) {
    auto inst = random_instance(rng);
    ASSERT_EQ(filter_results(inst.real, inst.decoys, inst.results),
              testing::brute_force_filter(inst.real.raw(), testing::raws_of(inst.decoys), inst.results))
        << "instance " << i;
  }
}

TEST(Filter, IdempotentAndDecoyOrderInvariant) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 2000; ++i) {
    auto inst = random_instance(rng);
    auto once = filter_results(inst.real, inst.decoys, inst.results);
    EXPECT_EQ(filter_results(inst.real, inst.decoys, once), once);
    auto shuffled = inst.decoys;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_EQ(filter_results(inst.real, shuffled, inst.results), once);
    // Output is a subsequence of the input.
    auto it = inst.results.begin();
    for (const auto& r : once) {
      it = std::find(it, inst.results.end(), r);
      ASSERT_NE(it, inst.results.end());
      ++it;
    }
  }
}

}  // namespace
}  // namespace xsearch
