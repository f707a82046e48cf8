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

#include "xsearch/history_store.hpp"

#include <cstring>
#include <fstream>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

namespace xsearch {

namespace {

// glibc keeps one size word in front of every chunk.
constexpr std::size_t kChunkHeader = sizeof(std::size_t);

std::size_t block_bytes(const char* p, std::size_t requested) {
#if defined(__GLIBC__)
  (void)requested;
  return malloc_usable_size(const_cast<char*>(p)) + kChunkHeader;
#else
  (void)p;
  return ((requested + kChunkHeader + 15) / 16) * 16;
#endif
}

}  // namespace

HistoryStore::HistoryStore(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) {
    throw Error(ErrorKind::kInvalidInput, "history capacity must be positive");
  }
}

void HistoryStore::push(const Query& q) {
  const std::string& raw = q.raw();
  if (raw.size() > kMaxQueryBytes) {
    throw Error(ErrorKind::kInvalidInput,
                "query exceeds " + std::to_string(kMaxQueryBytes) + " bytes");
  }
  Slot slot;
  slot.text.reset(new char[raw.size()]);
  std::memcpy(slot.text.get(), raw.data(), raw.size());
  slot.size = static_cast<std::uint32_t>(raw.size());

  std::unique_lock lock(mu_);
  if (slots_.size() < capacity_) {
    slots_.push_back(std::move(slot));
  } else {
    // The evicted block is released after the lock is dropped.
    std::swap(slots_[head_], slot);
    head_ = (head_ + 1) % capacity_;
  }
}

std::size_t HistoryStore::snapshot_len() const {
  std::shared_lock lock(mu_);
  return slots_.size();
}

std::string_view HistoryStore::entry_at(std::size_t i) const {
  return slots_[(head_ + i) % slots_.size()].view();
}

std::vector<std::string> HistoryStore::entries() const {
  std::shared_lock lock(mu_);
  std::vector<std::string> out;
  out.reserve(slots_.size());
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    out.emplace_back(entry_at(i));
  }
  return out;
}

std::size_t HistoryStore::accounted_bytes() const {
  std::shared_lock lock(mu_);
  std::size_t total = slots_.capacity() * sizeof(Slot);
  for (const Slot& s : slots_) total += block_bytes(s.text.get(), s.size);
  return total;
}

std::size_t HistoryStore::load_seed_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::kIo, "cannot open seed file " + path.string());
  }
  std::size_t pushed = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    Query q(line);
    if (q.raw().size() > kMaxQueryBytes) continue;
    push(q);
    ++pushed;
  }
  return pushed;
}

}  // namespace xsearch
