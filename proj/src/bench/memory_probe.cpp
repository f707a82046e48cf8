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

#include "xsearch/bench/memory_probe.hpp"

#include <charconv>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

#include "xsearch/error.hpp"
#include "xsearch/history_store.hpp"
#include "xsearch/query.hpp"

namespace xsearch::bench {
namespace {

constexpr std::string_view kFixedPrefix = "fixed:";

std::optional<std::size_t> heap_in_use() {
#if defined(__GLIBC__) && (__GLIBC__ > 2 || (__GLIBC__ == 2 && __GLIBC_MINOR__ >= 33))
  // Large blocks such as the slot array are mmapped and only show in hblkhd.
  const struct mallinfo2 mi = mallinfo2();
  return static_cast<std::size_t>(mi.uordblks + mi.hblkhd);
#else
  return std::nullopt;
#endif
}

std::string random_word(std::mt19937_64& rng, std::size_t len) {
  std::uniform_int_distribution<int> letter('a', 'z');
  std::string w(len, 'a');
  for (auto& c : w) c = static_cast<char>(letter(rng));
  return w;
}

}  // namespace

LengthDistribution LengthDistribution::parse(std::string_view text) {
  if (text == "aol-like") return aol_like();
  if (text.starts_with(kFixedPrefix)) {
    std::string_view digits = text.substr(kFixedPrefix.size());
    std::size_t n = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec == std::errc() && ptr == digits.data() + digits.size() && !digits.empty()) {
      return fixed(n);
    }
  }
  throw Error(ErrorKind::kInvalidInput,
              "length distribution must be fixed:N or aol-like, got " + std::string(text));
}

LengthDistribution LengthDistribution::fixed(std::size_t bytes) {
  if (bytes == 0 || bytes > HistoryStore::kMaxQueryBytes) {
    throw Error(ErrorKind::kInvalidInput, "fixed length must be in [1, 1000]");
  }
  LengthDistribution d;
  d.fixed_ = bytes;
  return d;
}

LengthDistribution LengthDistribution::aol_like() { return {}; }

std::string LengthDistribution::sample(std::mt19937_64& rng) const {
  if (fixed_) return random_word(rng, *fixed_);
  std::poisson_distribution<std::size_t> extra_words(1.5);
  std::uniform_int_distribution<std::size_t> word_len(3, 12);
  std::string out;
  for (std::size_t i = 0, n = 1 + extra_words(rng); i < n; ++i) {
    std::string w = random_word(rng, word_len(rng));
    if (out.size() + 1 + w.size() > HistoryStore::kMaxQueryBytes) break;
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

std::string LengthDistribution::describe() const {
  return fixed_ ? std::string(kFixedPrefix) + std::to_string(*fixed_) : "aol-like";
}

MemoryReport memory_probe(std::size_t n, const LengthDistribution& dist, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorKind::kInvalidInput, "need at least one entry");
  std::mt19937_64 rng(seed);
  const auto before = heap_in_use();
  std::size_t text_bytes = 0;
  MemoryReport r;
  {
    HistoryStore store(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::string text = dist.sample(rng);
      text_bytes += text.size();
      store.push(Query(text));
    }
    const auto after = heap_in_use();
    r.entries = store.snapshot_len();
    r.accounted_bytes = store.accounted_bytes();
    if (before && after && *after >= *before) r.heap_delta_bytes = *after - *before;
  }
  r.mean_query_bytes = static_cast<double>(text_bytes) / static_cast<double>(n);
  return r;
}

}  // namespace xsearch::bench
