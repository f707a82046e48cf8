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

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "xsearch/attestation.hpp"
#include "xsearch/history_store.hpp"
#include "xsearch/http_engine.hpp"
#include "xsearch/obfuscation.hpp"
#include "xsearch/protocol.hpp"
#include "xsearch/search_engine.hpp"
#include "xsearch/url.hpp"

namespace xsearch {

enum class BackendKind { kMock, kLive, kEcho };

std::string_view to_string(BackendKind kind);
/// "mock", "live" or "echo"; throws Error(kInvalidInput).
BackendKind parse_backend(std::string_view name);

/// Everything the trusted side receives through the init ecall. The host
/// reads files and environment variables; the trusted side never does.
struct TrustedParams {
  std::size_t k = 3;
  std::size_t history_capacity = HistoryStore::kDefaultCapacity;
  BackendKind backend = BackendKind::kMock;

  std::string engine_url;
  std::string engine_param = "q";
  std::string extractor = "json";
  std::vector<std::pair<std::string, std::string>> engine_headers;
  bool native_or = false;
  std::size_t per_query_limit = 20;
  std::size_t engine_concurrency = 4;

  RedirectPolicy redirect;
  std::vector<std::string> seed_queries;
  ResultSet corpus;
  /// Deterministic decoy selection for tests. Unset in production, where
  /// randomness comes from the OS CSPRNG.
  std::optional<std::uint64_t> rng_seed;

  nlohmann::json to_json() const;
  /// Throws Error(kInvalidInput) / Error(kParse).
  static TrustedParams from_json(const nlohmann::json& j);
};

/// The ocalls: outbound sockets plus the platform quote.
class UntrustedRuntime : public SocketOps {
 public:
  virtual Evidence quote(const Digest& report_data) = 0;
};

/// Engine access for one obfuscated query.
class SearchBackend {
 public:
  virtual ~SearchBackend() = default;
  virtual OrSearchOutcome search(const ObfuscatedQuery& oq) = 0;
};

class MockBackend : public SearchBackend {
 public:
  MockBackend(MockCorpus corpus, std::size_t per_query_limit);
  OrSearchOutcome search(const ObfuscatedQuery& oq) override;
  const MockCorpus& corpus() const noexcept { return corpus_; }

 private:
  MockCorpus corpus_;
  MockEngine engine_;
  std::size_t per_query_limit_;
};

/// HTTP engine reached through SocketOps (ocalls inside the enclave). By
/// default one request per sub-query; native_or sends the serialized OR
/// query as a single request instead.
class LiveBackend : public SearchBackend {
 public:
  LiveBackend(SocketOps& sockets, HttpEngineOptions options,
              std::size_t per_query_limit, bool native_or,
              std::size_t concurrency);
  OrSearchOutcome search(const ObfuscatedQuery& oq) override;

 private:
  HttpEngine engine_;
  std::size_t per_query_limit_;
  bool native_or_;
  std::size_t concurrency_;
};

/// UniformRandomBitGenerator backed by libsodium, or by a seeded mt19937_64
/// when a seed is given. Thread-safe.
class ProxyRandom {
 public:
  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  explicit ProxyRandom(std::optional<std::uint64_t> seed = std::nullopt);
  result_type operator()();

 private:
  std::mutex mu_;
  std::optional<std::mt19937_64> prng_;
};

struct ProxyStats {
  std::atomic<std::uint64_t> handshakes{0};
  std::atomic<std::uint64_t> requests{0};
  std::atomic<std::uint64_t> engine_searches{0};
  std::atomic<std::uint64_t> backend_errors{0};
  std::atomic<std::uint64_t> protocol_errors{0};
  std::atomic<std::uint64_t> degraded{0};
  std::atomic<std::uint64_t> sanitize_flagged{0};
};

/// The trusted half of the proxy. It sees plaintext queries; everything it
/// hands to the runtime is either client ciphertext or engine requests
/// carrying only the OR-ed sub-queries.
///
/// request() may run concurrently for different sockets. Calls for one
/// socket must be serialized by the caller, which the host's
/// connection-per-thread model guarantees.
class TrustedProxy {
 public:
  explicit TrustedProxy(UntrustedRuntime& runtime);
  ~TrustedProxy();

  /// ecall init. Builds the backend described by params and warm-starts the
  /// history from params.seed_queries.
  void init(const TrustedParams& params);
  /// Same, with an injected backend (tests).
  void init(const TrustedParams& params, std::unique_ptr<SearchBackend> backend);

  /// ecall request: bytes received on a client socket. An empty span means
  /// the peer closed and the session is dropped.
  void request(SocketHandle sock, std::span<const std::uint8_t> data);

  HistoryStore& history();
  const ProxyStats& stats() const noexcept { return stats_; }
  std::size_t session_count() const;

 private:
  struct Session;

  void on_frame(Session& s, SocketHandle sock, const Frame& frame);
  void on_handshake(Session& s, SocketHandle sock, const Frame& frame);
  void on_request(Session& s, SocketHandle sock, const Frame& frame);
  nlohmann::ordered_json serve(const Query& q, std::size_t k);
  void send_frame(SocketHandle sock, FrameType type, std::span<const std::uint8_t> payload);
  void send_sealed_error(Session& s, SocketHandle sock, std::string_view kind);
  void fail_session(Session& s, SocketHandle sock, std::string_view kind);

  UntrustedRuntime& runtime_;
  TrustedParams params_;
  std::unique_ptr<HistoryStore> history_;
  std::unique_ptr<SearchBackend> backend_;
  std::unique_ptr<ProxyRandom> rng_;
  ProxyStats stats_;

  mutable std::mutex sessions_mu_;
  std::unordered_map<SocketHandle, std::shared_ptr<Session>> sessions_;
};

/// The response document sent to clients.
nlohmann::ordered_json make_response_json(std::size_t k_effective, bool degraded,
                                          bool partial, const ResultSet& results);

}  // namespace xsearch
