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

#include "xsearch/attestation.hpp"

#include <sodium.h>

#include <algorithm>
#include <fstream>
#include <iterator>

#include "xsearch/error.hpp"

namespace xsearch {

namespace {

constexpr std::string_view kQuoteDomain = "xsearch-quote-v1";
constexpr std::string_view kHandshakeDomain = "xsearch-handshake-v1";

Bytes signed_message(const Digest& measurement, const Digest& report_data) {
  Bytes msg(kQuoteDomain.begin(), kQuoteDomain.end());
  msg.insert(msg.end(), measurement.begin(), measurement.end());
  msg.insert(msg.end(), report_data.begin(), report_data.end());
  return msg;
}

}  // namespace

Digest measure_bytes(std::span<const std::uint8_t> data) {
  crypto_init();
  Digest d;
  crypto_hash_sha256(d.data(), data.data(), data.size());
  return d;
}

Digest measure_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot read " + path.string());
  Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return measure_bytes(data);
}

Digest digest_from_hex(std::string_view hex) {
  Bytes raw = from_hex(hex);
  if (raw.size() != 32) throw Error(ErrorKind::kInvalidInput, "digest must be 32 bytes");
  Digest d;
  std::copy(raw.begin(), raw.end(), d.begin());
  return d;
}

Digest handshake_report_data(const Key32& proxy_share, const Key32& client_share) {
  crypto_init();
  Digest d;
  crypto_generichash_state st;
  crypto_generichash_init(&st, nullptr, 0, d.size());
  crypto_generichash_update(&st, reinterpret_cast<const unsigned char*>(kHandshakeDomain.data()),
                            kHandshakeDomain.size());
  crypto_generichash_update(&st, proxy_share.data(), proxy_share.size());
  crypto_generichash_update(&st, client_share.data(), client_share.size());
  crypto_generichash_final(&st, d.data(), d.size());
  return d;
}

Bytes Evidence::serialize() const {
  Bytes out;
  out.reserve(kBytes);
  out.insert(out.end(), measurement.begin(), measurement.end());
  out.insert(out.end(), report_data.begin(), report_data.end());
  out.insert(out.end(), platform_key.begin(), platform_key.end());
  out.insert(out.end(), signature.begin(), signature.end());
  return out;
}

Evidence Evidence::parse(std::span<const std::uint8_t> bytes) {
  if (bytes.size() != kBytes) {
    throw Error(ErrorKind::kProtocol, "evidence must be " + std::to_string(kBytes) + " bytes");
  }
  Evidence e;
  auto it = bytes.begin();
  std::copy_n(it, 32, e.measurement.begin());
  std::copy_n(it + 32, 32, e.report_data.begin());
  std::copy_n(it + 64, 32, e.platform_key.begin());
  std::copy_n(it + 96, 64, e.signature.begin());
  return e;
}

PlatformQuoter PlatformQuoter::from_seed(const Key32& seed) {
  crypto_init();
  PlatformQuoter q;
  crypto_sign_seed_keypair(q.public_key_.data(), q.secret_key_.data(), seed.data());
  return q;
}

PlatformQuoter PlatformQuoter::generate() {
  crypto_init();
  Key32 seed;
  randombytes_buf(seed.data(), seed.size());
  PlatformQuoter q = from_seed(seed);
  sodium_memzero(seed.data(), seed.size());
  return q;
}

PlatformQuoter PlatformQuoter::load_or_create(const std::filesystem::path& path) {
  crypto_init();
  Key32 seed;
  std::ifstream in(path);
  if (in) {
    std::string hex;
    in >> hex;
    Bytes raw = from_hex(hex);
    if (raw.size() != seed.size()) {
      throw Error(ErrorKind::kInvalidInput, "platform key file must hold 32 hex bytes");
    }
    std::copy(raw.begin(), raw.end(), seed.begin());
  } else {
    randombytes_buf(seed.data(), seed.size());
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
    out << to_hex(seed) << "\n";
  }
  return from_seed(seed);
}

Evidence PlatformQuoter::quote(const Digest& measurement, const Digest& report_data) const {
  Evidence e;
  e.measurement = measurement;
  e.report_data = report_data;
  e.platform_key = public_key_;
  Bytes msg = signed_message(measurement, report_data);
  crypto_sign_detached(e.signature.data(), nullptr, msg.data(), msg.size(), secret_key_.data());
  return e;
}

void verify_evidence(const Evidence& evidence, const Digest& expected_measurement,
                     const Digest& expected_report_data,
                     const std::optional<Key32>& trusted_platform_key) {
  crypto_init();
  Bytes msg = signed_message(evidence.measurement, evidence.report_data);
  if (crypto_sign_verify_detached(evidence.signature.data(), msg.data(), msg.size(),
                                  evidence.platform_key.data()) != 0) {
    throw Error(ErrorKind::kSignatureInvalid, "evidence signature does not verify");
  }
  if (trusted_platform_key && *trusted_platform_key != evidence.platform_key) {
    throw Error(ErrorKind::kSignatureInvalid, "evidence signed by an untrusted platform key");
  }
  if (sodium_memcmp(evidence.report_data.data(), expected_report_data.data(), 32) != 0) {
    throw Error(ErrorKind::kSignatureInvalid, "evidence is not bound to this handshake");
  }
  if (evidence.measurement != expected_measurement) {
    throw Error(ErrorKind::kMeasurementMismatch,
                "measurement " + to_hex(evidence.measurement) + " != expected " +
                    to_hex(expected_measurement));
  }
}

}  // namespace xsearch
