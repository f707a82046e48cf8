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

// Client <-> proxy framing.
//
//   +------+------------------+-----------------+
//   | type | length (u64, BE) | payload[length] |
//   +------+------------------+-----------------+
//
// handshake  client: client X25519 public key (32)
//            proxy:  proxy X25519 public key (32) || evidence (160)
// request    k override (1, 255 = proxy default) || counter (u64 BE) || AEAD
// response   counter (u64 BE) || AEAD(JSON result document)
// error      before the handshake completes: plaintext JSON
//            afterwards: counter (u64 BE) || AEAD(JSON error document)

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include "xsearch/socket_ops.hpp"

namespace xsearch {

enum class FrameType : std::uint8_t {
  kHandshake = 1,
  kRequest = 2,
  kResponse = 3,
  kError = 4,
};

inline constexpr std::size_t kFrameHeaderBytes = 9;
inline constexpr std::size_t kMaxFramePayload = 16u << 20;
inline constexpr std::uint8_t kDefaultK = 255;

struct Frame {
  FrameType type;
  Bytes payload;
};

Bytes encode_frame(FrameType type, std::span<const std::uint8_t> payload);

/// Incremental decoder for a byte stream. Throws Error(kProtocol) on an
/// unknown frame type or an oversized length.
class FrameDecoder {
 public:
  void feed(std::span<const std::uint8_t> data);
  std::optional<Frame> next();
  std::size_t buffered() const noexcept { return buf_.size() - pos_; }

 private:
  Bytes buf_;
  std::size_t pos_ = 0;
};

void put_u64_be(Bytes& out, std::uint64_t v);
std::uint64_t get_u64_be(std::span<const std::uint8_t> in);

}  // namespace xsearch
