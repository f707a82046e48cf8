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

#include "xsearch/eval/simattack.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "xsearch/error.hpp"

namespace xsearch::eval {
namespace {

double cosine_from_counts(std::size_t common, std::size_t a, std::size_t b) {
  if (a == 0 || b == 0) return 0.0;
  return static_cast<double>(common) /
         std::sqrt(static_cast<double>(a) * static_cast<double>(b));
}

// Folds an ascending run that is preceded by `zeros` zero similarities. Both
// the direct and the indexed paths go through here so they agree bit for bit.
double fold_sorted(const std::vector<double>& ascending_nonzero, std::size_t zeros,
                   double alpha) {
  double v = 0.0;
  std::size_t i = 0;
  if (zeros == 0) {
    v = ascending_nonzero.front();
    i = 1;
  }
  for (; i < ascending_nonzero.size(); ++i) {
    v = alpha * ascending_nonzero[i] + (1.0 - alpha) * v;
  }
  return v;
}

// Unique global maximum over the score matrix, or nothing on a tie.
std::optional<Identification> resolve(const std::vector<std::vector<double>>& scores,
                                      std::span<const UserProfile> profiles) {
  double best = -1.0;
  for (const auto& row : scores) {
    for (double v : row) best = std::max(best, v);
  }
  std::size_t ties = 0;
  Identification hit;
  for (std::size_t s = 0; s < scores.size(); ++s) {
    for (std::size_t p = 0; p < scores[s].size(); ++p) {
      if (std::abs(scores[s][p] - best) > kSimTieTolerance) continue;
      if (++ties > 1) return std::nullopt;
      hit = {p, profiles[p].user_id, s};
    }
  }
  if (ties == 0) return std::nullopt;
  return hit;
}

void check_profile(const UserProfile& p) {
  if (p.queries.empty()) {
    throw Error(ErrorKind::kInvalidInput, "profile of user '" + p.user_id + "' is empty");
  }
}

}  // namespace

double cosine_sim(const TokenSet& a, const TokenSet& b) {
  return cosine_from_counts(a.intersection_size(b), a.size(), b.size());
}

double cosine_sim(const Query& a, const Query& b) {
  return cosine_sim(a.tokens(), b.tokens());
}

std::vector<UserProfile> build_profiles(const std::vector<QueryLogRecord>& train) {
  std::map<std::string, UserProfile> by_user;
  for (const auto& r : train) {
    auto& p = by_user[r.user_id];
    p.user_id = r.user_id;
    p.queries.push_back(tokenize(r.query));
  }
  std::vector<UserProfile> out;
  out.reserve(by_user.size());
  for (auto& [id, p] : by_user) out.push_back(std::move(p));
  return out;
}

void SimAttackConfig::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw Error(ErrorKind::kInvalidInput, "smoothing factor must lie in (0, 1]");
  }
}

double smooth_ascending(std::vector<double> similarities, double alpha) {
  if (similarities.empty()) {
    throw Error(ErrorKind::kInvalidInput, "nothing to smooth");
  }
  std::sort(similarities.begin(), similarities.end());
  auto first_nonzero = std::find_if(similarities.begin(), similarities.end(),
                                    [](double s) { return s != 0.0; });
  const auto zeros = static_cast<std::size_t>(first_nonzero - similarities.begin());
  if (zeros == similarities.size()) return 0.0;
  std::vector<double> rest(first_nonzero, similarities.end());
  return fold_sorted(rest, zeros, alpha);
}

double sim(const Query& q, const UserProfile& p, const SimAttackConfig& cfg) {
  cfg.validate();
  check_profile(p);
  std::vector<double> s;
  s.reserve(p.queries.size());
  for (const auto& pq : p.queries) s.push_back(cosine_sim(q.tokens(), pq));
  return smooth_ascending(std::move(s), cfg.alpha);
}

std::optional<Identification> simattack_identify(std::span<const Query> sub_queries,
                                                 std::span<const UserProfile> profiles,
                                                 const SimAttackConfig& cfg) {
  std::vector<std::vector<double>> scores;
  scores.reserve(sub_queries.size());
  for (const auto& q : sub_queries) {
    auto& row = scores.emplace_back();
    for (const auto& p : profiles) row.push_back(sim(q, p, cfg));
  }
  return resolve(scores, profiles);
}

SimAttack::SimAttack(std::vector<UserProfile> profiles, SimAttackConfig cfg)
    : profiles_(std::move(profiles)), cfg_(cfg) {
  cfg_.validate();
  for (std::uint32_t p = 0; p < profiles_.size(); ++p) {
    check_profile(profiles_[p]);
    const auto& queries = profiles_[p].queries;
    for (std::uint32_t q = 0; q < queries.size(); ++q) {
      for (const auto& term : queries[q].terms()) index_[term].push_back({p, q});
    }
  }
}

std::vector<double> SimAttack::scores(const Query& q) const {
  std::vector<std::unordered_map<std::uint32_t, std::uint32_t>> common(profiles_.size());
  for (const auto& term : q.tokens().terms()) {
    auto it = index_.find(term);
    if (it == index_.end()) continue;
    for (const Posting& post : it->second) ++common[post.profile][post.query];
  }
  std::vector<double> out(profiles_.size(), 0.0);
  std::vector<double> nonzero;
  for (std::size_t p = 0; p < profiles_.size(); ++p) {
    if (common[p].empty()) continue;
    nonzero.clear();
    for (const auto& [query, count] : common[p]) {
      nonzero.push_back(cosine_from_counts(count, q.tokens().size(),
                                           profiles_[p].queries[query].size()));
    }
    std::sort(nonzero.begin(), nonzero.end());
    out[p] = fold_sorted(nonzero, profiles_[p].queries.size() - nonzero.size(), cfg_.alpha);
  }
  return out;
}

std::optional<Identification> SimAttack::identify(std::span<const Query> sub_queries) const {
  std::vector<std::vector<double>> all;
  all.reserve(sub_queries.size());
  for (const auto& q : sub_queries) all.push_back(scores(q));
  return resolve(all, profiles_);
}

ObfuscatedQuery no_protection(std::size_t, const LabeledQuery& q) {
  ObfuscatedQuery oq;
  oq.sub_queries = {q.query};
  return oq;
}

ReidentificationResult reidentification_rate(std::span<const LabeledQuery> test,
                                             const ProtectFn& protect,
                                             const SimAttack& attack) {
  if (test.empty()) throw Error(ErrorKind::kInvalidInput, "empty test set");
  ReidentificationResult out;
  out.n_test = test.size();
  for (std::size_t i = 0; i < test.size(); ++i) {
    ObfuscatedQuery oq = protect(i, test[i]);
    auto hit = attack.identify(oq.sub_queries);
    if (hit && hit->user_id == test[i].user_id && hit->sub_query_index == oq.real_index) {
      ++out.identified;
    }
  }
  out.rate = static_cast<double>(out.identified) / static_cast<double>(out.n_test);
  return out;
}

ReidentificationResult reidentification_rate(std::span<const LabeledQuery> test,
                                             const ProtectFn& protect,
                                             std::span<const UserProfile> profiles,
                                             const SimAttackConfig& cfg) {
  SimAttack attack(std::vector<UserProfile>(profiles.begin(), profiles.end()), cfg);
  return reidentification_rate(test, protect, attack);
}

std::vector<LabeledQuery> label_queries(const std::vector<QueryLogRecord>& rows) {
  std::vector<const QueryLogRecord*> order;
  order.reserve(rows.size());
  for (const auto& r : rows) order.push_back(&r);
  std::stable_sort(order.begin(), order.end(),
                   [](const auto* a, const auto* b) { return a->timestamp < b->timestamp; });
  std::vector<LabeledQuery> out;
  out.reserve(rows.size());
  for (const auto* r : order) out.push_back({r->user_id, Query(r->query)});
  return out;
}

}  // namespace xsearch::eval
