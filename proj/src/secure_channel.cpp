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

#include "xsearch/secure_channel.hpp"

#include <sodium.h>

#include <mutex>

#include "xsearch/error.hpp"
#include "xsearch/protocol.hpp"

namespace xsearch {

static_assert(crypto_kx_PUBLICKEYBYTES == 32 && crypto_kx_SECRETKEYBYTES == 32);
static_assert(crypto_kx_SESSIONKEYBYTES == 32);
static_assert(crypto_aead_xchacha20poly1305_ietf_KEYBYTES == 32);
static_assert(crypto_aead_xchacha20poly1305_ietf_ABYTES == SecureChannel::kTagBytes);

void crypto_init() {
  static std::once_flag once;
  std::call_once(once, [] {
    if (sodium_init() < 0) throw Error(ErrorKind::kProtocol, "libsodium failed to initialize");
  });
}

KxKeyPair KxKeyPair::generate() {
  crypto_init();
  KxKeyPair kp;
  crypto_kx_keypair(kp.public_key.data(), kp.secret_key.data());
  return kp;
}

SessionKeys client_session_keys(const KxKeyPair& client, const Key32& server_pk) {
  SessionKeys keys;
  if (crypto_kx_client_session_keys(keys.rx.data(), keys.tx.data(),
                                    client.public_key.data(),
                                    client.secret_key.data(), server_pk.data()) != 0) {
    throw Error(ErrorKind::kProtocol, "invalid server key share");
  }
  return keys;
}

SessionKeys server_session_keys(const KxKeyPair& server, const Key32& client_pk) {
  SessionKeys keys;
  if (crypto_kx_server_session_keys(keys.rx.data(), keys.tx.data(),
                                    server.public_key.data(),
                                    server.secret_key.data(), client_pk.data()) != 0) {
    throw Error(ErrorKind::kProtocol, "invalid client key share");
  }
  return keys;
}

namespace {

std::array<std::uint8_t, crypto_aead_xchacha20poly1305_ietf_NPUBBYTES> nonce_for(
    std::uint64_t counter) {
  std::array<std::uint8_t, crypto_aead_xchacha20poly1305_ietf_NPUBBYTES> nonce{};
  for (int i = 0; i < 8; ++i) {
    nonce[static_cast<std::size_t>(7 - i)] = static_cast<std::uint8_t>(counter >> (8 * i));
  }
  return nonce;
}

}  // namespace

SecureChannel::SecureChannel(const SessionKeys& keys) : keys_(keys) { crypto_init(); }

SecureChannel::~SecureChannel() { wipe(); }

SecureChannel::SecureChannel(SecureChannel&& other) noexcept
    : keys_(other.keys_),
      next_send_(other.next_send_),
      last_received_(other.last_received_) {
  other.wipe();
}

SecureChannel& SecureChannel::operator=(SecureChannel&& other) noexcept {
  if (this != &other) {
    keys_ = other.keys_;
    next_send_ = other.next_send_;
    last_received_ = other.last_received_;
    other.wipe();
  }
  return *this;
}

void SecureChannel::wipe() {
  sodium_memzero(keys_.rx.data(), keys_.rx.size());
  sodium_memzero(keys_.tx.data(), keys_.tx.size());
}

Bytes SecureChannel::seal(std::span<const std::uint8_t> plaintext,
                          std::span<const std::uint8_t> ad) {
  const std::uint64_t counter = next_send_++;
  Bytes out;
  out.reserve(kCounterBytes + plaintext.size() + kTagBytes);
  put_u64_be(out, counter);
  out.resize(kCounterBytes + plaintext.size() + kTagBytes);
  auto nonce = nonce_for(counter);
  unsigned long long clen = 0;
  crypto_aead_xchacha20poly1305_ietf_encrypt(
      out.data() + kCounterBytes, &clen, plaintext.data(), plaintext.size(),
      ad.data(), ad.size(), nullptr, nonce.data(), keys_.tx.data());
  out.resize(kCounterBytes + clen);
  return out;
}

Bytes SecureChannel::open(std::span<const std::uint8_t> sealed,
                          std::span<const std::uint8_t> ad) {
  if (sealed.size() < kCounterBytes + kTagBytes) {
    throw Error(ErrorKind::kProtocol, "sealed message too short");
  }
  const std::uint64_t counter = get_u64_be(sealed);
  if (counter <= last_received_) {
    throw Error(ErrorKind::kReplay, "stale message counter " + std::to_string(counter));
  }
  auto nonce = nonce_for(counter);
  std::span<const std::uint8_t> ct = sealed.subspan(kCounterBytes);
  Bytes plain(ct.size() - kTagBytes);
  unsigned long long mlen = 0;
  if (crypto_aead_xchacha20poly1305_ietf_decrypt(
          plain.data(), &mlen, nullptr, ct.data(), ct.size(), ad.data(),
          ad.size(), nonce.data(), keys_.rx.data()) != 0) {
    throw Error(ErrorKind::kAuthentication, "message failed authentication");
  }
  plain.resize(mlen);
  last_received_ = counter;
  return plain;
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kHex[b >> 4]);
    out.push_back(kHex[b & 0xF]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  auto nibble = [&](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw Error(ErrorKind::kInvalidInput, "invalid hex digit");
  };
  if (hex.size() % 2 != 0) throw Error(ErrorKind::kInvalidInput, "odd-length hex string");
  Bytes out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    out.push_back(static_cast<std::uint8_t>(nibble(hex[i]) * 16 + nibble(hex[i + 1])));
  }
  return out;
}

}  // namespace xsearch
