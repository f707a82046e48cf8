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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "xsearch/eval/dataset.hpp"
#include "xsearch/obfuscation.hpp"
#include "xsearch/query.hpp"

namespace xsearch::eval {

/// Cosine of binary bag-of-words vectors; 0 when either set is empty.
double cosine_sim(const TokenSet& a, const TokenSet& b);
double cosine_sim(const Query& a, const Query& b);

/// What the attacker knows about one user: the term sets of that user's
/// training queries.
struct UserProfile {
  std::string user_id;
  std::vector<TokenSet> queries;
};

/// One profile per user in id order, built from training rows only.
std::vector<UserProfile> build_profiles(const std::vector<QueryLogRecord>& train);

struct SimAttackConfig {
  double alpha = 0.5;

  /// Throws Error(kInvalidInput) unless 0 < alpha <= 1.
  void validate() const;
};

/// Sorts ascending and folds v1 = s1, vi = alpha * si + (1 - alpha) * v(i-1).
/// Throws Error(kInvalidInput) on an empty list.
double smooth_ascending(std::vector<double> similarities, double alpha);

/// Smoothed similarity of q against every query of the profile. Throws
/// Error(kInvalidInput) for an empty profile.
double sim(const Query& q, const UserProfile& p, const SimAttackConfig& cfg = {});

struct Identification {
  std::size_t profile_index = 0;
  std::string user_id;
  std::size_t sub_query_index = 0;

  friend bool operator==(const Identification&, const Identification&) = default;
};

/// Scores closer than this are a tie.
inline constexpr double kSimTieTolerance = 1e-12;

/// Scores every (sub-query, profile) pair and returns the pair holding the
/// global maximum when no other pair ties it. Direct evaluation of sim() for
/// every pair.
std::optional<Identification> simattack_identify(std::span<const Query> sub_queries,
                                                 std::span<const UserProfile> profiles,
                                                 const SimAttackConfig& cfg = {});

/// Same answers as simattack_identify, computed through an inverted index so
/// that only profile queries sharing a term with the sub-query are visited.
class SimAttack {
 public:
  explicit SimAttack(std::vector<UserProfile> profiles, SimAttackConfig cfg = {});

  /// sim(q, profile) for every profile, in profile order.
  std::vector<double> scores(const Query& q) const;

  std::optional<Identification> identify(std::span<const Query> sub_queries) const;

  const std::vector<UserProfile>& profiles() const noexcept { return profiles_; }

 private:
  struct Posting {
    std::uint32_t profile;
    std::uint32_t query;
  };

  std::vector<UserProfile> profiles_;
  SimAttackConfig cfg_;
  std::unordered_map<std::string, std::vector<Posting>> index_;
};

/// A test query and its true author.
struct LabeledQuery {
  std::string user_id;
  Query query;
};

/// Maps the position of a test query and the query itself to what the engine
/// observes. real_index marks the true sub-query.
using ProtectFn = std::function<ObfuscatedQuery(std::size_t, const LabeledQuery&)>;

/// The unprotected baseline: the query alone.
ObfuscatedQuery no_protection(std::size_t position, const LabeledQuery& q);

struct ReidentificationResult {
  std::size_t n_test = 0;
  std::size_t identified = 0;
  double rate = 0.0;
};

/// Fraction of test queries for which the attack returns exactly the true
/// user and the true sub-query. Throws Error(kInvalidInput) on an empty test
/// set.
ReidentificationResult reidentification_rate(std::span<const LabeledQuery> test,
                                             const ProtectFn& protect,
                                             const SimAttack& attack);
ReidentificationResult reidentification_rate(std::span<const LabeledQuery> test,
                                             const ProtectFn& protect,
                                             std::span<const UserProfile> profiles,
                                             const SimAttackConfig& cfg = {});

/// Test rows in timestamp order (stable), as labeled queries.
std::vector<LabeledQuery> label_queries(const std::vector<QueryLogRecord>& rows);

}  // namespace xsearch::eval
