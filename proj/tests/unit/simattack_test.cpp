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
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "xsearch/error.hpp"
#include "xsearch/eval/metrics.hpp"
#include "xsearch/eval/simattack.hpp"
#include "xsearch/eval/synthetic.hpp"

namespace xsearch::eval {
namespace {

// Oracles written from the definitions, sharing no code with the library.
double oracle_cosine(const std::string& a, const std::string& b) {
  std::set<std::string> sa, sb;
  std::istringstream ia(a), ib(b);
  for (std::string w; ia >> w;) sa.insert(w);
  for (std::string w; ib >> w;) sb.insert(w);
  if (sa.empty() || sb.empty()) return 0.0;
  std::vector<std::string> both;
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(both));
  return static_cast<double>(both.size()) / (std::sqrt(sa.size()) * std::sqrt(sb.size()));
}

double oracle_smooth(std::vector<double> s, double alpha) {
  std::sort(s.begin(), s.end());
  double v = s[0];
  for (std::size_t i = 1; i < s.size(); ++i) v = alpha * s[i] + (1 - alpha) * v;
  return v;
}

UserProfile profile(const std::string& id, std::initializer_list<const char*> queries) {
  UserProfile p{id, {}};
  for (const char* q : queries) p.queries.push_back(tokenize(q));
  return p;
}

TEST(Cosine, Examples) {
  EXPECT_DOUBLE_EQ(cosine_sim(Query("a b"), Query("b a")), 1.0);
  EXPECT_EQ(cosine_sim(Query("a b"), Query("c d")), 0.0);
  EXPECT_NEAR(cosine_sim(Query("a b"), Query("b c")), 0.5, 1e-12);
  EXPECT_EQ(cosine_sim(TokenSet{}, tokenize("a")), 0.0);
}

TEST(Cosine, MatchesOracleOnRandomPhrases) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 2000; ++i) {
    auto a = testing::random_phrase(rng, 12, 1, 6);
    auto b = testing::random_phrase(rng, 12, 1, 6);
    ASSERT_NEAR(cosine_sim(Query(a), Query(b)), oracle_cosine(a, b), 1e-12) << a << " | " << b;
  }
}

TEST(Smoothing, HandExamples) {
  EXPECT_NEAR(smooth_ascending({0.6, 0.2}, 0.5), 0.4, 1e-9);
  EXPECT_EQ(smooth_ascending({0.37}, 0.5), 0.37);
  EXPECT_EQ(smooth_ascending({0.3, 0.3, 0.3, 0.3}, 0.5), 0.3);
  EXPECT_THROW(smooth_ascending({}, 0.5), Error);
}

TEST(Smoothing, MatchesLiteralRecurrence) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::bernoulli_distribution zero(0.4);
  for (int i = 0; i < 2000; ++i) {
    std::vector<double> s(1 + rng() % 20);
    for (auto& v : s) v = zero(rng) ? 0.0 : u(rng);
    const double alpha = 0.05 + 0.95 * u(rng);
    ASSERT_NEAR(smooth_ascending(s, alpha), oracle_smooth(s, alpha), 1e-12);
  }
}

TEST(Smoothing, MonotoneAndBounded) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> s(2 + rng() % 10);
    for (auto& v : s) v = u(rng);
    std::sort(s.begin(), s.end());
    const double base = smooth_ascending(s, 0.5);
    EXPECT_GE(base, s.front() - 1e-15);
    EXPECT_LE(base, s.back() + 1e-15);
    // Raise one value without breaking the order.
    std::size_t j = rng() % s.size();
    double ceiling = j + 1 < s.size() ? s[j + 1] : 1.0;
    s[j] += (ceiling - s[j]) * u(rng);
    EXPECT_GE(smooth_ascending(s, 0.5), base - 1e-15);
  }
}

TEST(Sim, SingleQueryProfileIsThatCosine) {
  auto p = profile("u", {"b c"});
  EXPECT_NEAR(sim(Query("a b"), p), 0.5, 1e-12);
  EXPECT_THROW(sim(Query("a"), UserProfile{"empty", {}}), Error);
  EXPECT_THROW(sim(Query("a"), p, SimAttackConfig{0.0}), Error);
}

TEST(Identify, SinglePairIsReturned) {
  std::vector<UserProfile> ps = {profile("u1", {"x y"})};
  std::vector<Query> subs = {Query("x")};
  auto hit = simattack_identify(subs, ps);
  ASSERT_TRUE(hit);
  EXPECT_EQ(hit->user_id, "u1");
  EXPECT_EQ(hit->sub_query_index, 0u);
}

TEST(Identify, TieMeansNoIdentification) {
  std::vector<UserProfile> ps = {profile("u1", {"x y"}), profile("u2", {"x z"})};
  std::vector<Query> subs = {Query("x")};
  EXPECT_FALSE(simattack_identify(subs, ps).has_value());
  std::vector<Query> none = {Query("q")};
  EXPECT_FALSE(simattack_identify(none, ps).has_value());
}

// Brute force over pairs with the oracle sim.
std::optional<std::pair<std::size_t, std::size_t>> oracle_identify(
    const std::vector<std::string>& subs, const std::vector<std::vector<std::string>>& profiles) {
  std::vector<std::tuple<double, std::size_t, std::size_t>> all;
  for (std::size_t s = 0; s < subs.size(); ++s) {
    for (std::size_t p = 0; p < profiles.size(); ++p) {
      std::vector<double> c;
      for (const auto& q : profiles[p]) c.push_back(oracle_cosine(subs[s], q));
      all.emplace_back(oracle_smooth(c, 0.5), s, p);
    }
  }
  double best = -1;
  for (auto& [v, s, p] : all) best = std::max(best, v);
  std::vector<std::pair<std::size_t, std::size_t>> at_best;
  for (auto& [v, s, p] : all) {
    if (std::abs(v - best) <= 1e-12) at_best.emplace_back(s, p);
  }
  if (at_best.size() != 1) return std::nullopt;
  return at_best[0];
}

TEST(Identify, DisjointVocabulariesMatchBruteForce) {
  std::vector<std::vector<std::string>> raw = {
      {"apple pie", "apple tart", "pie crust"},
      {"rocket fuel", "rocket launch", "orbit"},
      {"guitar chord", "bass guitar", "chord chart"}};
  std::vector<UserProfile> ps;
  for (std::size_t u = 0; u < raw.size(); ++u) {
    UserProfile p{"u" + std::to_string(u), {}};
    for (const auto& q : raw[u]) p.queries.push_back(tokenize(q));
    ps.push_back(p);
  }
  std::vector<std::string> subs = {"rocket orbit", "apple", "guitar chord chart"};
  std::vector<Query> qs;
  for (const auto& s : subs) qs.emplace_back(s);
  auto hit = simattack_identify(qs, ps);
  auto want = oracle_identify(subs, raw);
  ASSERT_TRUE(hit && want);
  EXPECT_EQ(hit->sub_query_index, want->first);
  EXPECT_EQ(hit->profile_index, want->second);
}

struct RandomInstance {
  std::vector<std::string> subs;
  std::vector<std::vector<std::string>> raw_profiles;
  std::vector<UserProfile> profiles;
  std::vector<Query> queries;
};

RandomInstance random_instance(std::mt19937_64& rng) {
  RandomInstance in;
  const std::size_t users = 1 + rng() % 5;
  for (std::size_t u = 0; u < users; ++u) {
    auto& raw = in.raw_profiles.emplace_back();
    UserProfile p{"u" + std::to_string(u), {}};
    for (std::size_t i = 0, n = 1 + rng() % 6; i < n; ++i) {
      raw.push_back(testing::random_phrase(rng, 15, 1, 4));
      p.queries.push_back(tokenize(raw.back()));
    }
    in.profiles.push_back(std::move(p));
  }
  for (std::size_t s = 0, n = 1 + rng() % 6; s < n; ++s) {
    in.subs.push_back(testing::random_phrase(rng, 15, 1, 4));
    in.queries.emplace_back(in.subs.back());
  }
  return in;
}

TEST(Identify, MatchesBruteForceAndIndexedAttack) {
  std::mt19937_64 rng(12);
  std::size_t identified = 0;
  for (int i = 0; i < 2000; ++i) {
    auto in = random_instance(rng);
    auto hit = simattack_identify(in.queries, in.profiles);
    auto want = oracle_identify(in.subs, in.raw_profiles);
    ASSERT_EQ(hit.has_value(), want.has_value()) << i;
    if (hit) {
      ++identified;
      EXPECT_EQ(hit->sub_query_index, want->first);
      EXPECT_EQ(hit->profile_index, want->second);
    }
    SimAttack indexed(in.profiles);
    EXPECT_EQ(indexed.identify(in.queries), hit) << i;
    for (const auto& q : in.queries) {
      auto scores = indexed.scores(q);
      for (std::size_t p = 0; p < in.profiles.size(); ++p) {
        ASSERT_EQ(scores[p], sim(q, in.profiles[p]));
      }
    }
  }
  // The instances exercise both outcomes.
  EXPECT_GT(identified, 200u);
  EXPECT_LT(identified, 1900u);
}

TEST(Identify, InvariantUnderPermutation) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 500; ++i) {
    auto in = random_instance(rng);
    auto hit = simattack_identify(in.queries, in.profiles);
    std::vector<std::size_t> sp(in.queries.size()), pp(in.profiles.size());
    std::iota(sp.begin(), sp.end(), 0);
    std::iota(pp.begin(), pp.end(), 0);
    std::shuffle(sp.begin(), sp.end(), rng);
    std::shuffle(pp.begin(), pp.end(), rng);
    std::vector<Query> qs;
    for (auto s : sp) qs.push_back(in.queries[s]);
    std::vector<UserProfile> ps;
    for (auto p : pp) ps.push_back(in.profiles[p]);
    auto moved = simattack_identify(qs, ps);
    ASSERT_EQ(hit.has_value(), moved.has_value());
    if (hit) {
      EXPECT_EQ(moved->user_id, hit->user_id);
      EXPECT_EQ(sp[moved->sub_query_index], hit->sub_query_index);
    }
  }
}

std::vector<LabeledQuery> labeled(const std::vector<QueryLogRecord>& rows) {
  return label_queries(rows);
}

TEST(Reidentification, ProfilesFromTestQueriesGiveOne) {
  SyntheticConfig cfg;
  cfg.users = 6;
  cfg.queries_per_user = 10;
  cfg.overlap = 0.0;
  auto data = generate_clustered_dataset(cfg);
  auto test = labeled(data.records);
  auto r = reidentification_rate(test, no_protection, build_profiles(data.records));
  EXPECT_EQ(r.n_test, test.size());
  EXPECT_EQ(r.rate, 1.0);
}

TEST(Reidentification, DisjointProfilesGiveZero) {
  std::vector<UserProfile> ps = {profile("a", {"x"}), profile("b", {"y"})};
  std::vector<LabeledQuery> test = {{"a", Query("p q")}, {"b", Query("r")}};
  EXPECT_EQ(reidentification_rate(test, no_protection, ps).rate, 0.0);
  EXPECT_THROW(reidentification_rate({}, no_protection, ps), Error);
}

TEST(Reidentification, TruthMustMatchUserAndSlot) {
  std::vector<UserProfile> ps = {profile("a", {"alpha beta"}), profile("b", {"gamma"})};
  std::vector<LabeledQuery> test = {{"a", Query("alpha beta")}};
  // The engine sees the query at slot 1 behind an unrelated decoy.
  ProtectFn hidden = [](std::size_t, const LabeledQuery& q) {
    ObfuscatedQuery oq;
    oq.sub_queries = {Query("zzz"), q.query};
    oq.real_index = 1;
    return oq;
  };
  EXPECT_EQ(reidentification_rate(test, hidden, ps).rate, 1.0);
  // Wrong author label: identified pair is not the truth.
  std::vector<LabeledQuery> mislabeled = {{"b", Query("alpha beta")}};
  EXPECT_EQ(reidentification_rate(mislabeled, hidden, ps).rate, 0.0);
}

TEST(PrecisionRecall, Examples) {
  auto make = [](int from, int to) {
    ResultSet rs;
    for (int i = from; i < to; ++i) rs.push_back({"t", "d", "http://r/" + std::to_string(i)});
    return rs;
  };
  auto same = precision_recall(make(0, 5), make(0, 5));
  EXPECT_EQ(same.precision, 1.0);
  EXPECT_EQ(same.recall, 1.0);
  auto disjoint = precision_recall(make(0, 5), make(5, 9));
  EXPECT_EQ(disjoint.precision, 0.0);
  EXPECT_EQ(disjoint.recall, 0.0);
  // |r_or| = 20, |r_xs| = 15, 12 shared.
  auto pr = precision_recall(make(0, 20), make(8, 23));
  EXPECT_NEAR(pr.precision, 0.8, 1e-12);
  EXPECT_NEAR(pr.recall, 0.6, 1e-12);
  auto both_empty = precision_recall({}, {});
  EXPECT_EQ(both_empty.precision, 1.0);
  EXPECT_EQ(both_empty.recall, 1.0);
  auto nothing_returned = precision_recall(make(0, 3), {});
  EXPECT_EQ(nothing_returned.precision, 0.0);
  EXPECT_EQ(nothing_returned.recall, 0.0);
  auto nothing_expected = precision_recall({}, make(0, 3));
  EXPECT_EQ(nothing_expected.precision, 0.0);
  EXPECT_EQ(nothing_expected.recall, 1.0);
}

TEST(PrecisionRecall, MatchesSetOracle) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 2000; ++i) {
    ResultSet a, b;
    std::set<int> sa, sb;
    for (int j = 0, n = static_cast<int>(rng() % 12); j < n; ++j) {
      int v = static_cast<int>(rng() % 15);
      sa.insert(v);
      a.push_back({"", "", std::to_string(v)});
    }
    for (int j = 0, n = 1 + static_cast<int>(rng() % 12); j < n; ++j) {
      int v = static_cast<int>(rng() % 15);
      sb.insert(v);
      b.push_back({"", "", std::to_string(v)});
    }
    std::vector<int> both;
    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(both));
    auto pr = precision_recall(a, b);
    EXPECT_DOUBLE_EQ(pr.precision, double(both.size()) / double(sb.size()));
    EXPECT_DOUBLE_EQ(pr.recall, sa.empty() ? 1.0 : double(both.size()) / double(sa.size()));
  }
}

}  // namespace
}  // namespace xsearch::eval
