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

#include "xsearch/trusted_proxy.hpp"

#include <sodium.h>

#include "xsearch/error.hpp"
#include "xsearch/filtering.hpp"
#include "xsearch/secure_channel.hpp"

namespace xsearch {

std::string_view to_string(BackendKind kind) {
  switch (kind) {
    case BackendKind::kMock: return "mock";
    case BackendKind::kLive: return "live";
    case BackendKind::kEcho: return "echo";
  }
  return "mock";
}

BackendKind parse_backend(std::string_view name) {
  if (name == "mock") return BackendKind::kMock;
  if (name == "live") return BackendKind::kLive;
  if (name == "echo") return BackendKind::kEcho;
  throw Error(ErrorKind::kInvalidInput, "unknown backend '" + std::string(name) + "'");
}

nlohmann::json TrustedParams::to_json() const {
  nlohmann::json j;
  j["k"] = k;
  j["history_capacity"] = history_capacity;
  j["backend"] = std::string(to_string(backend));
  j["engine_url"] = engine_url;
  j["engine_param"] = engine_param;
  j["extractor"] = extractor;
  j["engine_headers"] = nlohmann::json::object();
  for (const auto& [name, value] : engine_headers) j["engine_headers"][name] = value;
  j["native_or"] = native_or;
  j["per_query_limit"] = per_query_limit;
  j["engine_concurrency"] = engine_concurrency;
  j["redirect_param"] = redirect.param;
  j["redirect_prefix"] = redirect.prefix;
  j["seed_queries"] = seed_queries;
  j["corpus"] = nlohmann::json::array();
  for (const auto& doc : corpus) {
    j["corpus"].push_back({{"title", doc.title}, {"desc", doc.desc}, {"url", doc.url}});
  }
  if (rng_seed) j["rng_seed"] = *rng_seed;
  return j;
}

TrustedParams TrustedParams::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorKind::kParse, "init parameters must be an object");
  TrustedParams p;
  try {
    p.k = j.value("k", p.k);
    p.history_capacity = j.value("history_capacity", p.history_capacity);
    p.backend = parse_backend(j.value("backend", std::string("mock")));
    p.engine_url = j.value("engine_url", p.engine_url);
    p.engine_param = j.value("engine_param", p.engine_param);
    p.extractor = j.value("extractor", p.extractor);
    if (auto it = j.find("engine_headers"); it != j.end()) {
      for (const auto& [name, value] : it->items()) {
        p.engine_headers.emplace_back(name, value.get<std::string>());
      }
    }
    p.native_or = j.value("native_or", p.native_or);
    p.per_query_limit = j.value("per_query_limit", p.per_query_limit);
    p.engine_concurrency = j.value("engine_concurrency", p.engine_concurrency);
    p.redirect.param = j.value("redirect_param", p.redirect.param);
    p.redirect.prefix = j.value("redirect_prefix", p.redirect.prefix);
    if (auto it = j.find("seed_queries"); it != j.end()) {
      p.seed_queries = it->get<std::vector<std::string>>();
    }
    if (auto it = j.find("corpus"); it != j.end()) p.corpus = results_from_json(*it);
    if (auto it = j.find("rng_seed"); it != j.end() && !it->is_null()) {
      p.rng_seed = it->get<std::uint64_t>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("init parameters: ") + e.what());
  }
  if (p.history_capacity == 0) {
    throw Error(ErrorKind::kInvalidInput, "history_capacity must be >= 1");
  }
  if (p.per_query_limit == 0) {
    throw Error(ErrorKind::kInvalidInput, "per_query_limit must be >= 1");
  }
  return p;
}

MockBackend::MockBackend(MockCorpus corpus, std::size_t per_query_limit)
    : corpus_(std::move(corpus)),
      engine_(corpus_, per_query_limit),
      per_query_limit_(per_query_limit) {}

namespace {

std::vector<std::string> sub_query_texts(const ObfuscatedQuery& oq) {
  std::vector<std::string> texts;
  texts.reserve(oq.sub_queries.size());
  for (const auto& q : oq.sub_queries) texts.push_back(q.raw());
  return texts;
}

}  // namespace

OrSearchOutcome MockBackend::search(const ObfuscatedQuery& oq) {
  return search_or_simulated(engine_, sub_query_texts(oq), per_query_limit_);
}

LiveBackend::LiveBackend(SocketOps& sockets, HttpEngineOptions options,
                         std::size_t per_query_limit, bool native_or,
                         std::size_t concurrency)
    : engine_(sockets, std::move(options)),
      per_query_limit_(per_query_limit),
      native_or_(native_or),
      concurrency_(concurrency) {}

OrSearchOutcome LiveBackend::search(const ObfuscatedQuery& oq) {
  if (!native_or_) {
    return search_or_simulated(engine_, sub_query_texts(oq), per_query_limit_,
                               concurrency_);
  }
  OrSearchOutcome out;
  try {
    ResultSet page = engine_.fetch(serialize(oq));
    out.results = merge_round_robin(std::span(&page, 1), page.size());
  } catch (const Error& e) {
    throw Error(ErrorKind::kBackend,
                std::string("engine request failed (") + std::string(to_string(e.kind())) +
                    ": " + e.what() + ")");
  }
  return out;
}

ProxyRandom::ProxyRandom(std::optional<std::uint64_t> seed) {
  if (seed) prng_.emplace(*seed);
  crypto_init();
}

ProxyRandom::result_type ProxyRandom::operator()() {
  if (prng_) {
    std::lock_guard lock(mu_);
    return (*prng_)();
  }
  result_type v;
  randombytes_buf(&v, sizeof(v));
  return v;
}

nlohmann::ordered_json make_response_json(std::size_t k_effective, bool degraded,
                                          bool partial, const ResultSet& results) {
  nlohmann::ordered_json j;
  j["k_effective"] = k_effective;
  j["results"] = to_json(results);
  j["degraded"] = degraded;
  j["partial"] = partial;
  return j;
}

struct TrustedProxy::Session {
  std::mutex mu;
  FrameDecoder decoder;
  std::optional<SecureChannel> channel;
  bool closed = false;
};

TrustedProxy::TrustedProxy(UntrustedRuntime& runtime) : runtime_(runtime) {
  crypto_init();
}

TrustedProxy::~TrustedProxy() = default;

void TrustedProxy::init(const TrustedParams& params) {
  std::unique_ptr<SearchBackend> backend;
  switch (params.backend) {
    case BackendKind::kMock:
      backend = std::make_unique<MockBackend>(MockCorpus(params.corpus),
                                              params.per_query_limit);
      break;
    case BackendKind::kLive: {
      HttpEngineOptions opts;
      opts.base_url = params.engine_url;
      opts.param = params.engine_param;
      opts.headers = params.engine_headers;
      opts.extractor = make_extractor(params.extractor);
      backend = std::make_unique<LiveBackend>(runtime_, std::move(opts),
                                              params.per_query_limit,
                                              params.native_or,
                                              params.engine_concurrency);
      break;
    }
    case BackendKind::kEcho:
      break;
  }
  init(params, std::move(backend));
}

void TrustedProxy::init(const TrustedParams& params,
                        std::unique_ptr<SearchBackend> backend) {
  params_ = params;
  params_.corpus.clear();
  params_.seed_queries.clear();
  history_ = std::make_unique<HistoryStore>(params.history_capacity);
  for (const auto& line : params.seed_queries) {
    if (trim(line).empty() || trim(line).size() > HistoryStore::kMaxQueryBytes) continue;
    history_->push(Query(line));
  }
  backend_ = std::move(backend);
  rng_ = std::make_unique<ProxyRandom>(params.rng_seed);
  if (!backend_ && params.backend != BackendKind::kEcho) {
    throw Error(ErrorKind::kInvalidInput, "a search backend is required");
  }
}

HistoryStore& TrustedProxy::history() {
  if (!history_) throw Error(ErrorKind::kInvalidInput, "proxy not initialized");
  return *history_;
}

std::size_t TrustedProxy::session_count() const {
  std::lock_guard lock(sessions_mu_);
  return sessions_.size();
}

void TrustedProxy::request(SocketHandle sock, std::span<const std::uint8_t> data) {
  if (data.empty()) {
    std::lock_guard lock(sessions_mu_);
    sessions_.erase(sock);
    return;
  }
  if (!history_) throw Error(ErrorKind::kInvalidInput, "proxy not initialized");
  std::shared_ptr<Session> session;
  {
    std::lock_guard lock(sessions_mu_);
    auto& slot = sessions_[sock];
    if (!slot) slot = std::make_shared<Session>();
    session = slot;
  }
  std::lock_guard lock(session->mu);
  if (session->closed) return;
  try {
    session->decoder.feed(data);
    while (!session->closed) {
      auto frame = session->decoder.next();
      if (!frame) break;
      on_frame(*session, sock, *frame);
    }
  } catch (const Error& e) {
    fail_session(*session, sock, to_string(e.kind()));
  }
}

void TrustedProxy::on_frame(Session& s, SocketHandle sock, const Frame& frame) {
  switch (frame.type) {
    case FrameType::kHandshake:
      on_handshake(s, sock, frame);
      return;
    case FrameType::kRequest:
      on_request(s, sock, frame);
      return;
    default:
      fail_session(s, sock, "protocol");
  }
}

void TrustedProxy::on_handshake(Session& s, SocketHandle sock, const Frame& frame) {
  if (s.channel || frame.payload.size() != 32) {
    fail_session(s, sock, "protocol");
    return;
  }
  Key32 client_share;
  std::copy(frame.payload.begin(), frame.payload.end(), client_share.begin());
  KxKeyPair kx = KxKeyPair::generate();
  SessionKeys keys = server_session_keys(kx, client_share);
  sodium_memzero(kx.secret_key.data(), kx.secret_key.size());
  Evidence evidence = runtime_.quote(handshake_report_data(kx.public_key, client_share));

  Bytes reply(kx.public_key.begin(), kx.public_key.end());
  Bytes ev = evidence.serialize();
  reply.insert(reply.end(), ev.begin(), ev.end());
  s.channel.emplace(keys);
  sodium_memzero(keys.rx.data(), keys.rx.size());
  sodium_memzero(keys.tx.data(), keys.tx.size());
  send_frame(sock, FrameType::kHandshake, reply);
  ++stats_.handshakes;
}

void TrustedProxy::on_request(Session& s, SocketHandle sock, const Frame& frame) {
  if (!s.channel || frame.payload.empty()) {
    fail_session(s, sock, "protocol");
    return;
  }
  const std::uint8_t k_byte = frame.payload[0];
  const std::uint8_t ad[2] = {static_cast<std::uint8_t>(FrameType::kRequest), k_byte};
  Bytes plain;
  try {
    plain = s.channel->open(std::span(frame.payload).subspan(1), ad);
  } catch (const Error& e) {
    // Replays and forgeries end the session without touching the engine.
    fail_session(s, sock, to_string(e.kind()));
    return;
  }
  ++stats_.requests;

  std::optional<Query> q;
  try {
    q.emplace(as_text(plain));
  } catch (const Error&) {
    send_sealed_error(s, sock, "invalid_query");
    return;
  }
  const std::size_t k = k_byte == kDefaultK ? params_.k : k_byte;

  nlohmann::ordered_json response;
  try {
    response = serve(*q, k);
  } catch (const Error& e) {
    ++stats_.backend_errors;
    send_sealed_error(s, sock, e.kind() == ErrorKind::kInvalidInput ? "invalid_query" : "backend");
    return;
  }
  const std::string body = response.dump();
  const std::uint8_t rad[1] = {static_cast<std::uint8_t>(FrameType::kResponse)};
  send_frame(sock, FrameType::kResponse, s.channel->seal(as_bytes(body), rad));
}

nlohmann::ordered_json TrustedProxy::serve(const Query& q, std::size_t k) {
  if (params_.backend == BackendKind::kEcho) {
    return make_response_json(0, false, false, {});
  }
  ObfuscatedQuery oq = obfuscate(q, k, *history_, *rng_);
  if (oq.degraded) ++stats_.degraded;
  ++stats_.engine_searches;
  OrSearchOutcome outcome = backend_->search(oq);
  const std::vector<Query> decoys = oq.decoys();
  ResultSet kept = filter_results(oq.real(), decoys, outcome.results);
  std::vector<std::size_t> flagged;
  ResultSet clean = sanitize_results(kept, params_.redirect, &flagged);
  stats_.sanitize_flagged += flagged.size();
  return make_response_json(oq.k_effective, oq.degraded, outcome.partial, clean);
}

void TrustedProxy::send_frame(SocketHandle sock, FrameType type,
                              std::span<const std::uint8_t> payload) {
  Bytes bytes = encode_frame(type, payload);
  runtime_.send(sock, bytes);
}

void TrustedProxy::send_sealed_error(Session& s, SocketHandle sock, std::string_view kind) {
  nlohmann::json doc = {{"error", kind}};
  const std::string body = doc.dump();
  const std::uint8_t ad[1] = {static_cast<std::uint8_t>(FrameType::kError)};
  send_frame(sock, FrameType::kError, s.channel->seal(as_bytes(body), ad));
}

void TrustedProxy::fail_session(Session& s, SocketHandle sock, std::string_view kind) {
  ++stats_.protocol_errors;
  s.closed = true;
  try {
    if (s.channel) {
      send_sealed_error(s, sock, kind);
    } else {
      nlohmann::json doc = {{"error", kind}};
      send_frame(sock, FrameType::kError, as_bytes(doc.dump()));
    }
  } catch (const Error&) {
    // peer already gone
  }
  runtime_.close(sock);
}

}  // namespace xsearch
