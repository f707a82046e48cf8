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

// Simulated enclave attestation.
//
// The loader measures the trusted-side artifact (SHA-256 of the shared
// object it is about to map) and a platform quoting key signs
// (measurement, report_data). report_data binds the quote to one handshake:
// BLAKE2b-256 over both ephemeral key shares. A broker accepts the channel
// only if the signature verifies, the quote is bound to its own key share,
// and the measurement equals the one it was built to trust.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>

#include "xsearch/secure_channel.hpp"

namespace xsearch {

using Digest = std::array<std::uint8_t, 32>;
using Signature = std::array<std::uint8_t, 64>;

Digest measure_bytes(std::span<const std::uint8_t> data);
/// Throws Error(kIo).
Digest measure_file(const std::filesystem::path& path);
/// 64 hex characters; throws Error(kInvalidInput).
Digest digest_from_hex(std::string_view hex);

Digest handshake_report_data(const Key32& proxy_share, const Key32& client_share);

struct Evidence {
  static constexpr std::size_t kBytes = 32 + 32 + 32 + 64;

  Digest measurement{};
  Digest report_data{};
  Key32 platform_key{};
  Signature signature{};

  Bytes serialize() const;
  /// Throws Error(kProtocol) on a wrong length.
  static Evidence parse(std::span<const std::uint8_t> bytes);
};

/// Stand-in for the platform quoting enclave: an Ed25519 key that vouches
/// for measurements taken by the loader.
class PlatformQuoter {
 public:
  static PlatformQuoter generate();
  static PlatformQuoter from_seed(const Key32& seed);
  /// Reads a 32-byte hex seed, creating the file with a fresh seed if absent.
  static PlatformQuoter load_or_create(const std::filesystem::path& path);

  Evidence quote(const Digest& measurement, const Digest& report_data) const;
  const Key32& public_key() const noexcept { return public_key_; }

 private:
  Key32 public_key_{};
  std::array<std::uint8_t, 64> secret_key_{};
};

/// Checks, in order: signature (kSignatureInvalid), platform key trust when
/// one is pinned (kSignatureInvalid), handshake binding (kSignatureInvalid),
/// measurement equality (kMeasurementMismatch).
void verify_evidence(const Evidence& evidence, const Digest& expected_measurement,
                     const Digest& expected_report_data,
                     const std::optional<Key32>& trusted_platform_key);

}  // namespace xsearch
