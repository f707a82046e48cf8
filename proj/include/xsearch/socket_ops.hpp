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

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace xsearch {

using Bytes = std::vector<std::uint8_t>;
using SocketHandle = std::int64_t;

/// The outbound socket primitives the trusted side may use. Inside the
/// enclave these are ocalls; elsewhere they are plain POSIX sockets.
/// All methods throw Error(kNetwork) on failure.
class SocketOps {
 public:
  virtual ~SocketOps() = default;
  /// Resolves host and connects.
  virtual SocketHandle connect(const std::string& host, std::uint16_t port) = 0;
  /// Sends the whole buffer.
  virtual void send(SocketHandle sock, std::span<const std::uint8_t> data) = 0;
  /// Returns the byte count read; 0 means the peer closed.
  virtual std::size_t recv(SocketHandle sock, std::span<std::uint8_t> buf) = 0;
  virtual void close(SocketHandle sock) = 0;
};

class PosixSocketOps : public SocketOps {
 public:
  explicit PosixSocketOps(
      std::chrono::milliseconds timeout = std::chrono::seconds(10))
      : timeout_(timeout) {}

  SocketHandle connect(const std::string& host, std::uint16_t port) override;
  void send(SocketHandle sock, std::span<const std::uint8_t> data) override;
  std::size_t recv(SocketHandle sock, std::span<std::uint8_t> buf) override;
  void close(SocketHandle sock) override;

  /// Applies a new send and receive timeout to an open socket.
  static void set_timeout(SocketHandle sock, std::chrono::milliseconds timeout);

 private:
  std::chrono::milliseconds timeout_;
};

/// Splits "host:port"; throws Error(kInvalidInput).
std::pair<std::string, std::uint16_t> split_host_port(const std::string& addr);

}  // namespace xsearch
