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

#include "xsearch/enclave_host.hpp"

#include <dlfcn.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include <nlohmann/json.hpp>

#include "xsearch/error.hpp"
#include "xsearch/text.hpp"

namespace xsearch {

namespace {

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw Error(ErrorKind::kInvalidInput,
                "config '" + std::string(key) + "': not a number: " + std::string(value));
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw Error(ErrorKind::kInvalidInput,
              "config '" + std::string(key) + "': not a boolean: " + std::string(value));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

void ProxyConfig::set(std::string_view key, std::string_view value) {
  if (key == "k") {
    k = parse_number<std::size_t>(key, value);
    if (k >= kDefaultK) throw Error(ErrorKind::kInvalidInput, "k must be below 255");
  } else if (key == "history_capacity") {
    history_capacity = parse_number<std::size_t>(key, value);
    if (history_capacity == 0) {
      throw Error(ErrorKind::kInvalidInput, "history_capacity must be >= 1");
    }
  } else if (key == "backend") {
    backend = parse_backend(value);
  } else if (key == "listen_addr") {
    listen_addr = value;
  } else if (key == "engine_url") {
    engine_url = value;
  } else if (key == "engine_param") {
    engine_param = value;
  } else if (key == "extractor") {
    extractor = value;
  } else if (key == "native_or") {
    native_or = parse_bool(key, value);
  } else if (key == "per_query_limit") {
    per_query_limit = parse_number<std::size_t>(key, value);
  } else if (key == "engine_concurrency") {
    engine_concurrency = parse_number<std::size_t>(key, value);
  } else if (key == "engine_timeout_ms") {
    engine_timeout = std::chrono::milliseconds(parse_number<std::int64_t>(key, value));
  } else if (key == "api_key_env") {
    api_key_env = value;
  } else if (key == "api_key_header") {
    api_key_header = value;
  } else if (key == "redirect_param") {
    redirect_param = value;
  } else if (key == "redirect_prefix") {
    redirect_prefix = value;
  } else if (key == "seed_file") {
    seed_file = std::string(value);
  } else if (key == "corpus_file") {
    corpus_file = std::string(value);
  } else if (key == "enclave_path") {
    enclave_path = std::string(value);
  } else if (key == "platform_key_file") {
    platform_key_file = std::string(value);
  } else if (key == "rng_seed") {
    rng_seed = parse_number<std::uint64_t>(key, value);
  } else {
    throw Error(ErrorKind::kInvalidInput, "unknown config key '" + std::string(key) + "'");
  }
}

ProxyConfig ProxyConfig::parse(std::string_view text) {
  ProxyConfig cfg;
  std::string_view body = trim(text);
  if (!body.empty() && body.front() == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kParse, std::string("config: ") + e.what());
    }
    for (const auto& [key, value] : j.items()) {
      cfg.set(key, value.is_string() ? value.get<std::string>() : value.dump());
    }
    return cfg;
  }
  std::istringstream lines{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    std::string_view l = trim(line);
    if (l.empty() || l.front() == '#') continue;
    auto eq = l.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::kParse, "config line " + std::to_string(lineno) + ": expected key=value");
    }
    cfg.set(trim(l.substr(0, eq)), trim(l.substr(eq + 1)));
  }
  return cfg;
}

ProxyConfig ProxyConfig::load(const std::filesystem::path& path) {
  ProxyConfig cfg = parse(read_file(path));
  // Relative paths in a config file are relative to the file.
  const auto base = path.parent_path();
  for (auto* p : {&cfg.seed_file, &cfg.corpus_file, &cfg.enclave_path, &cfg.platform_key_file}) {
    if (!p->empty() && p->is_relative()) *p = base / *p;
  }
  return cfg;
}

TrustedParams make_trusted_params(const ProxyConfig& cfg) {
  TrustedParams p;
  p.k = cfg.k;
  p.history_capacity = cfg.history_capacity;
  p.backend = cfg.backend;
  p.engine_url = cfg.engine_url;
  p.engine_param = cfg.engine_param;
  p.extractor = cfg.extractor;
  p.native_or = cfg.native_or;
  p.per_query_limit = cfg.per_query_limit;
  p.engine_concurrency = cfg.engine_concurrency;
  p.redirect.param = cfg.redirect_param;
  p.redirect.prefix = cfg.redirect_prefix;
  p.rng_seed = cfg.rng_seed;

  if (!cfg.api_key_env.empty() && !cfg.api_key_header.empty()) {
    const char* key = std::getenv(cfg.api_key_env.c_str());
    if (key == nullptr || *key == '\0') {
      throw Error(ErrorKind::kInvalidInput, "environment variable " + cfg.api_key_env + " is not set");
    }
    p.engine_headers.emplace_back(cfg.api_key_header, key);
  }
  if (!cfg.seed_file.empty()) {
    std::istringstream lines(read_file(cfg.seed_file));
    std::string line;
    while (std::getline(lines, line)) {
      if (!trim(line).empty()) p.seed_queries.push_back(line);
    }
  }
  if (!cfg.corpus_file.empty()) {
    try {
      p.corpus = results_from_json(nlohmann::json::parse(read_file(cfg.corpus_file)));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kParse, cfg.corpus_file.string() + ": " + e.what());
    }
  }
  if (p.backend == BackendKind::kLive && p.engine_url.empty()) {
    throw Error(ErrorKind::kInvalidInput, "live backend needs engine_url");
  }
  return p;
}

EnclaveHost::EnclaveHost(const std::filesystem::path& enclave_path, PlatformQuoter quoter,
                         std::chrono::milliseconds engine_timeout)
    : quoter_(std::move(quoter)), engine_sockets_(engine_timeout) {
  const std::string image = read_file(enclave_path);
  measurement_ = measure_bytes(as_bytes(image));

  handle_ = ::dlopen(enclave_path.c_str(), RTLD_NOW | RTLD_LOCAL);
  if (handle_ == nullptr) {
    throw Error(ErrorKind::kIo, std::string("cannot load enclave: ") + ::dlerror());
  }
  auto create = reinterpret_cast<xs_enclave_create_fn>(::dlsym(handle_, "xs_enclave_create"));
  destroy_ = reinterpret_cast<xs_enclave_destroy_fn>(::dlsym(handle_, "xs_enclave_destroy"));
  init_ = reinterpret_cast<xs_ecall_init_fn>(::dlsym(handle_, "xs_ecall_init"));
  request_ = reinterpret_cast<xs_ecall_request_fn>(::dlsym(handle_, "xs_ecall_request"));
  if (!create || !destroy_ || !init_ || !request_) {
    ::dlclose(handle_);
    throw Error(ErrorKind::kIo, "enclave image lacks the expected entry points");
  }

  table_.ctx = this;
  table_.connect = &EnclaveHost::oc_connect;
  table_.send = &EnclaveHost::oc_send;
  table_.recv = &EnclaveHost::oc_recv;
  table_.close = &EnclaveHost::oc_close;
  table_.quote = &EnclaveHost::oc_quote;
  enclave_ = create(&table_);
  if (enclave_ == nullptr) {
    ::dlclose(handle_);
    throw Error(ErrorKind::kIo, "enclave creation failed");
  }
}

EnclaveHost::~EnclaveHost() {
  if (enclave_ != nullptr) destroy_(enclave_);
  if (handle_ != nullptr) ::dlclose(handle_);
}

void EnclaveHost::init(const TrustedParams& params) {
  const std::string blob = params.to_json().dump();
  int rc = init_(enclave_, blob.data(), blob.size());
  if (rc != XS_OK) {
    throw Error(ErrorKind::kInvalidInput,
                "enclave rejected init parameters (code " + std::to_string(rc) + ")");
  }
}

void EnclaveHost::request(SocketHandle client, std::span<const std::uint8_t> data) {
  int rc = request_(enclave_, client, data.data(), data.size());
  if (rc != XS_OK) {
    throw Error(ErrorKind::kProtocol, "enclave request failed (code " + std::to_string(rc) + ")");
  }
}

void EnclaveHost::register_client(SocketHandle fd) {
  std::lock_guard lock(clients_mu_);
  clients_.insert(fd);
}

void EnclaveHost::unregister_client(SocketHandle fd) {
  std::lock_guard lock(clients_mu_);
  clients_.erase(fd);
}

xs_sock_t EnclaveHost::oc_connect(void* ctx, const char* host, uint16_t port) {
  auto* self = static_cast<EnclaveHost*>(ctx);
  ++self->ocalls_;
  try {
    return self->engine_sockets_.connect(host, port);
  } catch (const Error&) {
    return XS_ERR_NETWORK;
  }
}

int64_t EnclaveHost::oc_send(void* ctx, xs_sock_t sock, const uint8_t* buf, size_t len) {
  auto* self = static_cast<EnclaveHost*>(ctx);
  ++self->ocalls_;
  try {
    self->engine_sockets_.send(sock, std::span(buf, len));
    return static_cast<int64_t>(len);
  } catch (const Error&) {
    return XS_ERR_NETWORK;
  }
}

int64_t EnclaveHost::oc_recv(void* ctx, xs_sock_t sock, uint8_t* buf, size_t len) {
  auto* self = static_cast<EnclaveHost*>(ctx);
  ++self->ocalls_;
  try {
    return static_cast<int64_t>(self->engine_sockets_.recv(sock, std::span(buf, len)));
  } catch (const Error&) {
    return XS_ERR_NETWORK;
  }
}

int EnclaveHost::oc_close(void* ctx, xs_sock_t sock) {
  auto* self = static_cast<EnclaveHost*>(ctx);
  ++self->ocalls_;
  bool is_client;
  {
    std::lock_guard lock(self->clients_mu_);
    is_client = self->clients_.contains(sock);
  }
  if (is_client) {
    ::shutdown(static_cast<int>(sock), SHUT_RDWR);
  } else {
    ::close(static_cast<int>(sock));
  }
  return XS_OK;
}

int EnclaveHost::oc_quote(void* ctx, const uint8_t report_data[32],
                          uint8_t evidence[XS_EVIDENCE_BYTES]) {
  auto* self = static_cast<EnclaveHost*>(ctx);
  ++self->ocalls_;
  Digest rd;
  std::memcpy(rd.data(), report_data, rd.size());
  Bytes ev = self->quoter_.quote(self->measurement_, rd).serialize();
  std::memcpy(evidence, ev.data(), ev.size());
  return XS_OK;
}

ProxyServer::ProxyServer(EnclaveHost& host, const std::string& listen_addr) : host_(host) {
  auto [name, port] = split_host_port(listen_addr);
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  const std::string service = std::to_string(port);
  int rc = ::getaddrinfo(name.c_str(), service.c_str(), &hints, &res);
  if (rc != 0) {
    throw Error(ErrorKind::kNetwork, "resolve " + name + ": " + ::gai_strerror(rc));
  }
  int err = 0;
  for (addrinfo* ai = res; ai != nullptr && listen_fd_ < 0; ai = ai->ai_next) {
    int fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol);
    if (fd < 0) {
      err = errno;
      continue;
    }
    int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    if (::bind(fd, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(fd, 4096) == 0) {
      listen_fd_ = fd;
    } else {
      err = errno;
      ::close(fd);
    }
  }
  ::freeaddrinfo(res);
  if (listen_fd_ < 0) {
    throw Error(ErrorKind::kNetwork, "listen on " + listen_addr + ": " + std::strerror(err));
  }
  sockaddr_storage addr{};
  socklen_t len = sizeof(addr);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = addr.ss_family == AF_INET6
              ? ntohs(reinterpret_cast<sockaddr_in6*>(&addr)->sin6_port)
              : ntohs(reinterpret_cast<sockaddr_in*>(&addr)->sin_port);
}

ProxyServer::~ProxyServer() { stop(); }

void ProxyServer::start() {
  acceptor_ = std::thread([this] { accept_loop(); });
}

void ProxyServer::stop() {
  if (stopping_.exchange(true)) return;
  if (listen_fd_ >= 0) ::shutdown(listen_fd_, SHUT_RDWR);
  if (acceptor_.joinable()) acceptor_.join();
  if (listen_fd_ >= 0) {
    ::close(listen_fd_);
    listen_fd_ = -1;
  }
  {
    std::lock_guard lock(conns_mu_);
    for (auto& c : conns_) {
      if (c.fd >= 0) ::shutdown(static_cast<int>(c.fd), SHUT_RDWR);
    }
  }
  reap(true);
}

void ProxyServer::accept_loop() {
  while (!stopping_) {
    int fd = ::accept4(listen_fd_, nullptr, nullptr, SOCK_CLOEXEC);
    if (fd < 0) {
      if (errno == EINTR || errno == ECONNABORTED) continue;
      if (stopping_) return;
      if (errno == EMFILE || errno == ENFILE) {
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
        continue;
      }
      return;
    }
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    ++accepted_;
    host_.register_client(fd);
    reap(false);
    std::lock_guard lock(conns_mu_);
    Conn& conn = conns_.emplace_back();
    conn.fd = fd;
    conn.thread = std::thread([this, &conn] { serve(conn); });
  }
}

void ProxyServer::serve(Conn& conn) {
  const SocketHandle fd = conn.fd;
  std::vector<std::uint8_t> buf(64 * 1024);
  while (true) {
    ssize_t n = ::recv(static_cast<int>(fd), buf.data(), buf.size(), 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    try {
      host_.request(fd, std::span(buf.data(), static_cast<std::size_t>(n)));
    } catch (const Error&) {
      break;
    }
  }
  try {
    host_.request(fd, {});
  } catch (const Error&) {
  }
  host_.unregister_client(fd);
  std::lock_guard lock(conns_mu_);
  ::close(static_cast<int>(fd));
  conn.fd = -1;
  conn.done = true;
}

void ProxyServer::reap(bool all) {
  std::list<Conn> finished;
  {
    std::lock_guard lock(conns_mu_);
    for (auto it = conns_.begin(); it != conns_.end();) {
      auto next = std::next(it);
      if (all || it->done) finished.splice(finished.end(), conns_, it);
      it = next;
    }
  }
  for (auto& c : finished) {
    if (c.thread.joinable()) c.thread.join();
  }
}

}  // namespace xsearch
