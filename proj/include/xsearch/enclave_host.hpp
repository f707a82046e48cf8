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

// Untrusted half of the proxy: loads the trusted shared object, serves its
// ocalls and feeds it client bytes from a TCP listener.

#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <list>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <unordered_set>

#include "xsearch/attestation.hpp"
#include "xsearch/enclave_abi.h"
#include "xsearch/socket_ops.hpp"
#include "xsearch/trusted_proxy.hpp"

namespace xsearch {

/// Operator configuration. Accepts JSON or key=value lines ('#' comments).
struct ProxyConfig {
  std::size_t k = 3;
  std::size_t history_capacity = HistoryStore::kDefaultCapacity;
  BackendKind backend = BackendKind::kMock;
  std::string listen_addr = "127.0.0.1:8642";

  std::string engine_url;
  std::string engine_param = "q";
  std::string extractor = "json";
  bool native_or = false;
  std::size_t per_query_limit = 20;
  std::size_t engine_concurrency = 4;
  std::chrono::milliseconds engine_timeout{10'000};
  /// Name of an environment variable holding an API key, sent in
  /// api_key_header when both are set.
  std::string api_key_env;
  std::string api_key_header;

  std::string redirect_param = "u";
  std::string redirect_prefix;

  std::filesystem::path seed_file;
  std::filesystem::path corpus_file;
  std::filesystem::path enclave_path;
  std::filesystem::path platform_key_file;
  std::optional<std::uint64_t> rng_seed;

  /// Throws Error(kParse) / Error(kInvalidInput).
  static ProxyConfig parse(std::string_view text);
  static ProxyConfig load(const std::filesystem::path& path);
  /// Applies one setting by name; throws Error(kInvalidInput).
  void set(std::string_view key, std::string_view value);
};

/// Reads the seed and corpus files and the API key so the trusted side
/// receives plain values.
TrustedParams make_trusted_params(const ProxyConfig& cfg);

/// Loads the trusted shared object and owns one instance of it. The
/// measurement is the SHA-256 of the bytes on disk at load time.
class EnclaveHost {
 public:
  EnclaveHost(const std::filesystem::path& enclave_path, PlatformQuoter quoter,
              std::chrono::milliseconds engine_timeout = std::chrono::seconds(10));
  ~EnclaveHost();

  EnclaveHost(const EnclaveHost&) = delete;
  EnclaveHost& operator=(const EnclaveHost&) = delete;

  const Digest& measurement() const noexcept { return measurement_; }
  const Key32& platform_key() const noexcept { return quoter_.public_key(); }

  /// ecall init. Throws Error(kInvalidInput) when the trusted side refuses.
  void init(const TrustedParams& params);
  /// ecall request. An empty span tells the trusted side the peer left.
  void request(SocketHandle client, std::span<const std::uint8_t> data);

  /// Client sockets are owned by the server; a close ocall on one only
  /// shuts it down so the reader thread can finish.
  void register_client(SocketHandle fd);
  void unregister_client(SocketHandle fd);

  std::uint64_t ocall_count() const noexcept { return ocalls_.load(); }

 private:
  static xs_sock_t oc_connect(void* ctx, const char* host, uint16_t port);
  static int64_t oc_send(void* ctx, xs_sock_t sock, const uint8_t* buf, size_t len);
  static int64_t oc_recv(void* ctx, xs_sock_t sock, uint8_t* buf, size_t len);
  static int oc_close(void* ctx, xs_sock_t sock);
  static int oc_quote(void* ctx, const uint8_t report_data[32],
                      uint8_t evidence[XS_EVIDENCE_BYTES]);

  PlatformQuoter quoter_;
  Digest measurement_{};
  PosixSocketOps engine_sockets_;
  xs_ocall_table table_{};

  void* handle_ = nullptr;
  xs_enclave* enclave_ = nullptr;
  xs_enclave_destroy_fn destroy_ = nullptr;
  xs_ecall_init_fn init_ = nullptr;
  xs_ecall_request_fn request_ = nullptr;

  std::mutex clients_mu_;
  std::unordered_set<SocketHandle> clients_;
  std::atomic<std::uint64_t> ocalls_{0};
};

/// TCP front end: one reader thread per client connection, each handing
/// received bytes to the enclave.
class ProxyServer {
 public:
  /// Binds immediately; port 0 picks an ephemeral port.
  ProxyServer(EnclaveHost& host, const std::string& listen_addr);
  ~ProxyServer();

  ProxyServer(const ProxyServer&) = delete;
  ProxyServer& operator=(const ProxyServer&) = delete;

  std::uint16_t port() const noexcept { return port_; }
  void start();
  /// Closes the listener and every client, then joins all threads.
  void stop();
  std::uint64_t connections_accepted() const noexcept { return accepted_.load(); }

 private:
  struct Conn {
    SocketHandle fd = -1;
    std::thread thread;
    std::atomic<bool> done{false};
  };

  void accept_loop();
  void serve(Conn& conn);
  void reap(bool all);

  EnclaveHost& host_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::thread acceptor_;
  std::atomic<bool> stopping_{false};
  std::atomic<std::uint64_t> accepted_{0};

  std::mutex conns_mu_;
  std::list<Conn> conns_;
};

}  // namespace xsearch
