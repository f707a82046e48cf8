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

// Client-side broker: attests the proxy, then exchanges sealed frames.

#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "xsearch/attestation.hpp"
#include "xsearch/protocol.hpp"
#include "xsearch/search_result.hpp"
#include "xsearch/secure_channel.hpp"
#include "xsearch/socket_ops.hpp"

namespace xsearch {

/// A byte stream to the proxy. Errors throw Error(kNetwork).
class Transport {
 public:
  virtual ~Transport() = default;
  virtual void send(std::span<const std::uint8_t> data) = 0;
  /// 0 means the peer closed.
  virtual std::size_t recv(std::span<std::uint8_t> buf) = 0;
  virtual void close() = 0;
};

class TcpTransport : public Transport {
 public:
  static std::unique_ptr<TcpTransport> connect(
      const std::string& addr,
      std::chrono::milliseconds timeout = std::chrono::seconds(30));
  ~TcpTransport() override;

  void send(std::span<const std::uint8_t> data) override;
  std::size_t recv(std::span<std::uint8_t> buf) override;
  void close() override;
  /// Replaces the send and receive timeout given at connect time.
  void set_timeout(std::chrono::milliseconds timeout);

 private:
  TcpTransport(PosixSocketOps ops, SocketHandle fd) : ops_(ops), fd_(fd) {}
  PosixSocketOps ops_;
  SocketHandle fd_ = -1;
};

/// Wraps another transport and keeps a copy of every byte in both
/// directions. Can also cut the inbound stream after a byte budget to
/// emulate a truncated reply.
class RecordingTransport : public Transport {
 public:
  explicit RecordingTransport(std::unique_ptr<Transport> inner)
      : inner_(std::move(inner)) {}

  void send(std::span<const std::uint8_t> data) override;
  std::size_t recv(std::span<std::uint8_t> buf) override;
  void close() override { inner_->close(); }

  /// After `n` more inbound bytes the stream reports end-of-file.
  void truncate_inbound_after(std::size_t n) { inbound_budget_ = n; }

  const Bytes& sent() const noexcept { return sent_; }
  const Bytes& received() const noexcept { return received_; }

 private:
  std::unique_ptr<Transport> inner_;
  Bytes sent_;
  Bytes received_;
  std::optional<std::size_t> inbound_budget_;
};

struct QueryResponse {
  std::size_t k_effective = 0;
  bool degraded = false;
  bool partial = false;
  ResultSet results;
  /// The decrypted JSON document as received.
  std::string raw_json;
};

/// One attested, encrypted session. query() keeps one request in flight.
/// For pipelining, one thread may call send_query while another calls
/// receive_response; responses arrive in request order.
class BrokerSession {
 public:
  /// Runs the handshake and verifies the evidence before returning.
  /// Failures are distinct: kMeasurementMismatch, kSignatureInvalid,
  /// kNetwork, kProtocol (including a truncated or malformed reply).
  static BrokerSession connect_and_attest(
      std::unique_ptr<Transport> transport, const Digest& expected_measurement,
      const std::optional<Key32>& trusted_platform_key = std::nullopt);
  static BrokerSession connect_and_attest(
      const std::string& addr, const Digest& expected_measurement,
      const std::optional<Key32>& trusted_platform_key = std::nullopt);

  BrokerSession(BrokerSession&&) noexcept = default;
  BrokerSession& operator=(BrokerSession&&) noexcept = default;
  ~BrokerSession();

  /// Sends one query. Blank text throws Error(kInvalidInput) before any
  /// byte is written. A proxy error frame surfaces as kBackend (engine
  /// failure), kInvalidInput (query refused) or kProtocol.
  QueryResponse query(std::string_view text,
                      std::optional<std::uint8_t> k_override = std::nullopt);

  void send_query(std::string_view text,
                  std::optional<std::uint8_t> k_override = std::nullopt);
  QueryResponse receive_response();

  Transport& transport() { return *transport_; }
  void close();

 private:
  BrokerSession(std::unique_ptr<Transport> transport, SecureChannel channel);
  Frame read_frame();

  std::unique_ptr<Transport> transport_;
  std::optional<SecureChannel> channel_;
  FrameDecoder decoder_;
};

/// Parses the proxy's result document.
QueryResponse parse_query_response(std::string_view json);

}  // namespace xsearch
