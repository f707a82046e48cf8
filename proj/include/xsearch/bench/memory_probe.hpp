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

// Fills a history store with synthetic queries and reports its footprint.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>

namespace xsearch::bench {

/// Query length law for synthetic history entries.
class LengthDistribution {
 public:
  /// "fixed:N" (1 <= N <= 1000 bytes) or "aol-like". Throws
  /// Error(kInvalidInput).
  static LengthDistribution parse(std::string_view text);
  static LengthDistribution fixed(std::size_t bytes);
  /// 1 + Poisson(1.5) words of 3 to 12 lowercase letters, about 20 bytes on
  /// average, capped at 1000 bytes.
  static LengthDistribution aol_like();

  std::string sample(std::mt19937_64& rng) const;
  std::string describe() const;

 private:
  std::optional<std::size_t> fixed_;
};

struct MemoryReport {
  std::size_t entries = 0;
  double mean_query_bytes = 0.0;
  /// The store's own accounting: slot array plus allocator blocks.
  std::size_t accounted_bytes = 0;
  /// Growth of the allocator's in-use bytes across the fill, when the C
  /// library can report it.
  std::optional<std::size_t> heap_delta_bytes;

  double accounted_mib() const { return static_cast<double>(accounted_bytes) / (1 << 20); }
};

/// Pushes n queries into a store of capacity n and measures it.
MemoryReport memory_probe(std::size_t n, const LengthDistribution& dist, std::uint64_t seed = 1);

}  // namespace xsearch::bench
