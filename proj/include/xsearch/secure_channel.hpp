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

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "xsearch/socket_ops.hpp"

namespace xsearch {

using Key32 = std::array<std::uint8_t, 32>;

/// Calls sodium_init once per process; safe to call repeatedly.
void crypto_init();

/// Ephemeral X25519 key pair for one handshake.
struct KxKeyPair {
  Key32 public_key{};
  Key32 secret_key{};

  static KxKeyPair generate();
};

/// Directional keys: rx decrypts what the peer sends, tx encrypts ours.
struct SessionKeys {
  Key32 rx{};
  Key32 tx{};
};

/// Throws Error(kProtocol) when the peer key is unusable.
SessionKeys client_session_keys(const KxKeyPair& client, const Key32& server_pk);
SessionKeys server_session_keys(const KxKeyPair& server, const Key32& client_pk);

/// XChaCha20-Poly1305 with a per-direction counter nonce. The counter is sent
/// in the clear ahead of the ciphertext; a receiver only accepts counters
/// strictly greater than the last one it opened.
class SecureChannel {
 public:
  static constexpr std::size_t kCounterBytes = 8;
  static constexpr std::size_t kTagBytes = 16;

  explicit SecureChannel(const SessionKeys& keys);
  ~SecureChannel();

  SecureChannel(SecureChannel&&) noexcept;
  SecureChannel& operator=(SecureChannel&&) noexcept;
  SecureChannel(const SecureChannel&) = delete;
  SecureChannel& operator=(const SecureChannel&) = delete;

  /// counter || ciphertext. `ad` is authenticated but not included.
  Bytes seal(std::span<const std::uint8_t> plaintext,
             std::span<const std::uint8_t> ad);

  /// Throws Error(kReplay) for a stale counter, Error(kAuthentication) when
  /// the tag does not verify, Error(kProtocol) when the input is too short.
  Bytes open(std::span<const std::uint8_t> sealed,
             std::span<const std::uint8_t> ad);

  std::uint64_t last_received() const noexcept { return last_received_; }

 private:
  void wipe();

  SessionKeys keys_;
  std::uint64_t next_send_ = 1;
  std::uint64_t last_received_ = 0;
};

std::string to_hex(std::span<const std::uint8_t> bytes);
/// Throws Error(kInvalidInput) on odd length or non-hex characters.
Bytes from_hex(std::string_view hex);

inline std::span<const std::uint8_t> as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}
inline std::string_view as_text(std::span<const std::uint8_t> b) {
  return {reinterpret_cast<const char*>(b.data()), b.size()};
}

}  // namespace xsearch
