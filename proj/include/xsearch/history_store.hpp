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
#include <filesystem>
#include <memory>
#include <mutex>
#include <random>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "xsearch/error.hpp"
#include "xsearch/query.hpp"

namespace xsearch {

/// Bounded FIFO window over the most recent queries seen by the proxy. It is
/// the decoy pool: obfuscation samples from it, then pushes the real query.
///
/// Entries hold only the raw text (one heap block each) so a million AOL-size
/// queries stay far below the enclave page cache budget. Tokens are rebuilt
/// when an entry is sampled.
///
/// Thread-safe. Pushes take an exclusive lock; samples take a shared lock and
/// copy the text out, so no caller ever observes a partially written entry.
class HistoryStore {
 public:
  static constexpr std::size_t kDefaultCapacity = 100'000;
  static constexpr std::size_t kMaxQueryBytes = 1'000;

  explicit HistoryStore(std::size_t capacity = kDefaultCapacity);

  HistoryStore(const HistoryStore&) = delete;
  HistoryStore& operator=(const HistoryStore&) = delete;

  /// Appends q as the newest entry, evicting the oldest when full. Throws
  /// Error(kInvalidInput) when q.raw() exceeds kMaxQueryBytes.
  void push(const Query& q);

  /// n independent uniform draws with replacement. Throws
  /// Error(kHistoryEmpty) when the store is empty and n > 0.
  template <std::uniform_random_bit_generator Rng>
  std::vector<Query> sample(std::size_t n, Rng& rng) const;

  std::size_t snapshot_len() const;
  std::size_t capacity() const noexcept { return capacity_; }

  /// Entries oldest to newest. Copies under the shared lock.
  std::vector<std::string> entries() const;

  /// Heap bytes attributable to the store: the slot array plus every text
  /// block including allocator chunk overhead.
  std::size_t accounted_bytes() const;

  /// Pushes every non-blank line of a UTF-8 text file in file order. Lines
  /// that fail validation are skipped; returns the number pushed.
  std::size_t load_seed_file(const std::filesystem::path& path);

 private:
  struct Slot {
    std::unique_ptr<char[]> text;
    std::uint32_t size = 0;

    std::string_view view() const { return {text.get(), size}; }
  };

  std::string_view entry_at(std::size_t i) const;  // caller holds the lock

  std::size_t capacity_;
  mutable std::shared_mutex mu_;
  std::vector<Slot> slots_;
  std::size_t head_ = 0;  // index of the oldest entry once the ring is full
};

template <std::uniform_random_bit_generator Rng>
std::vector<Query> HistoryStore::sample(std::size_t n, Rng& rng) const {
  std::vector<Query> out;
  if (n == 0) return out;
  std::vector<std::string> picked;
  picked.reserve(n);
  {
    std::shared_lock lock(mu_);
    if (slots_.empty()) {
      throw Error(ErrorKind::kHistoryEmpty, "history store is empty");
    }
    std::uniform_int_distribution<std::size_t> pick(0, slots_.size() - 1);
    for (std::size_t i = 0; i < n; ++i) {
      picked.emplace_back(slots_[pick(rng)].view());
    }
  }
  out.reserve(n);
  for (auto& text : picked) out.emplace_back(text);
  return out;
}

}  // namespace xsearch
