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
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xsearch/history_store.hpp"
#include "xsearch/query.hpp"

namespace xsearch {

/// The real query hidden among decoys. real_index is trusted-side state only
/// and is never part of the serialized form.
struct ObfuscatedQuery {
  std::vector<Query> sub_queries;
  std::size_t real_index = 0;
  std::size_t k_effective = 0;
  /// Decoys were requested but the history was empty.
  bool degraded = false;

  const Query& real() const { return sub_queries.at(real_index); }
  std::vector<Query> decoys() const;
};

/// Draws k decoys from the history, places q at a uniformly random slot among
/// the k+1 positions, and only then pushes q so it can never be its own
/// decoy. With an empty history the result degrades to q alone.
///
/// Decoys are drawn before the slot. The joint distribution is the same as
/// drawing the slot first, and for a fixed rng state the decoys for k are a
/// prefix of the decoys for any larger k.
template <std::uniform_random_bit_generator Rng>
ObfuscatedQuery obfuscate(const Query& q, std::size_t k, HistoryStore& store,
                          Rng& rng) {
  if (q.raw().size() > HistoryStore::kMaxQueryBytes) {
    throw Error(ErrorKind::kInvalidInput, "query too long");
  }
  ObfuscatedQuery out;
  std::vector<Query> decoys;
  if (k > 0) {
    try {
      decoys = store.sample(k, rng);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kHistoryEmpty) throw;
      out.degraded = true;
    }
  }
  out.k_effective = decoys.size();
  std::uniform_int_distribution<std::size_t> slot(0, out.k_effective);
  out.real_index = slot(rng);
  out.sub_queries.reserve(out.k_effective + 1);
  for (std::size_t i = 0, d = 0; i <= out.k_effective; ++i) {
    if (i == out.real_index) {
      out.sub_queries.push_back(q);
    } else {
      out.sub_queries.push_back(std::move(decoys[d++]));
    }
  }
  store.push(q);
  return out;
}

/// Joins sub-query texts with " OR ". A text is wrapped in double quotes
/// (inner quotes doubled) when it contains the standalone token OR or starts
/// with a quote, which keeps parse_or_query an exact inverse.
std::string serialize(const ObfuscatedQuery& oq);
std::string serialize_or_query(std::span<const std::string> sub_queries);

/// Inverse of serialize. Throws Error(kParse) on malformed quoting.
std::vector<std::string> parse_or_query(std::string_view text);

}  // namespace xsearch
