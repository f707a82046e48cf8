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

#include "xsearch/broker.hpp"

#include <sodium.h>
#include <sys/socket.h>

#include <algorithm>

#include <nlohmann/json.hpp>

#include "xsearch/error.hpp"
#include "xsearch/text.hpp"

namespace xsearch {

std::unique_ptr<TcpTransport> TcpTransport::connect(const std::string& addr,
                                                    std::chrono::milliseconds timeout) {
  auto [host, port] = split_host_port(addr);
  PosixSocketOps ops(timeout);
  SocketHandle fd = ops.connect(host, port);
  return std::unique_ptr<TcpTransport>(new TcpTransport(ops, fd));
}

TcpTransport::~TcpTransport() { close(); }

void TcpTransport::send(std::span<const std::uint8_t> data) {
  if (fd_ < 0) throw Error(ErrorKind::kNetwork, "transport closed");
  ops_.send(fd_, data);
}

std::size_t TcpTransport::recv(std::span<std::uint8_t> buf) {
  if (fd_ < 0) throw Error(ErrorKind::kNetwork, "transport closed");
  return ops_.recv(fd_, buf);
}

void TcpTransport::set_timeout(std::chrono::milliseconds timeout) {
  if (fd_ < 0) throw Error(ErrorKind::kNetwork, "transport closed");
  PosixSocketOps::set_timeout(fd_, timeout);
}

void TcpTransport::close() {
  if (fd_ >= 0) {
    ops_.close(fd_);
    fd_ = -1;
  }
}

void RecordingTransport::send(std::span<const std::uint8_t> data) {
  sent_.insert(sent_.end(), data.begin(), data.end());
  inner_->send(data);
}

std::size_t RecordingTransport::recv(std::span<std::uint8_t> buf) {
  if (inbound_budget_) {
    if (*inbound_budget_ == 0) return 0;
    buf = buf.first(std::min(buf.size(), *inbound_budget_));
  }
  std::size_t n = inner_->recv(buf);
  if (inbound_budget_) *inbound_budget_ -= n;
  received_.insert(received_.end(), buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(n));
  return n;
}

namespace {

Frame read_frame_from(Transport& t, FrameDecoder& decoder) {
  std::uint8_t buf[16 * 1024];
  while (true) {
    if (auto f = decoder.next()) return std::move(*f);
    std::size_t n = t.recv(buf);
    if (n == 0) {
      throw Error(ErrorKind::kProtocol,
                  decoder.buffered() > 0 ? "connection closed mid-frame"
                                         : "connection closed by proxy");
    }
    decoder.feed(std::span(buf, n));
  }
}

std::string error_kind_of(std::string_view doc) {
  try {
    auto j = nlohmann::json::parse(doc);
    return j.value("error", std::string("unknown"));
  } catch (const nlohmann::json::exception&) {
    return "unknown";
  }
}

[[noreturn]] void throw_proxy_error(const std::string& kind) {
  if (kind == "backend") throw Error(ErrorKind::kBackend, "proxy reported an engine failure");
  if (kind == "invalid_query") throw Error(ErrorKind::kInvalidInput, "proxy refused the query");
  throw Error(ErrorKind::kProtocol, "proxy reported error: " + kind);
}

}  // namespace

BrokerSession::BrokerSession(std::unique_ptr<Transport> transport, SecureChannel channel)
    : transport_(std::move(transport)), channel_(std::move(channel)) {}

BrokerSession::~BrokerSession() { close(); }

void BrokerSession::close() {
  if (transport_) transport_->close();
}

BrokerSession BrokerSession::connect_and_attest(const std::string& addr,
                                                const Digest& expected_measurement,
                                                const std::optional<Key32>& trusted_platform_key) {
  return connect_and_attest(TcpTransport::connect(addr), expected_measurement,
                            trusted_platform_key);
}

BrokerSession BrokerSession::connect_and_attest(std::unique_ptr<Transport> transport,
                                                const Digest& expected_measurement,
                                                const std::optional<Key32>& trusted_platform_key) {
  KxKeyPair kx = KxKeyPair::generate();
  transport->send(encode_frame(FrameType::kHandshake, kx.public_key));

  FrameDecoder decoder;
  Frame reply = read_frame_from(*transport, decoder);
  if (reply.type == FrameType::kError) {
    throw Error(ErrorKind::kProtocol,
                "handshake refused: " + error_kind_of(as_text(reply.payload)));
  }
  if (reply.type != FrameType::kHandshake || reply.payload.size() != 32 + Evidence::kBytes) {
    throw Error(ErrorKind::kProtocol, "malformed handshake reply");
  }
  Key32 proxy_share;
  std::copy_n(reply.payload.begin(), 32, proxy_share.begin());
  Evidence evidence = Evidence::parse(std::span(reply.payload).subspan(32));
  verify_evidence(evidence, expected_measurement,
                  handshake_report_data(proxy_share, kx.public_key), trusted_platform_key);

  SessionKeys keys = client_session_keys(kx, proxy_share);
  sodium_memzero(kx.secret_key.data(), kx.secret_key.size());
  SecureChannel channel(keys);
  sodium_memzero(keys.rx.data(), keys.rx.size());
  sodium_memzero(keys.tx.data(), keys.tx.size());

  BrokerSession session(std::move(transport), std::move(channel));
  session.decoder_ = std::move(decoder);
  return session;
}

Frame BrokerSession::read_frame() { return read_frame_from(*transport_, decoder_); }

QueryResponse BrokerSession::query(std::string_view text,
                                   std::optional<std::uint8_t> k_override) {
  send_query(text, k_override);
  return receive_response();
}

void BrokerSession::send_query(std::string_view text,
                               std::optional<std::uint8_t> k_override) {
  if (trim(text).empty()) throw Error(ErrorKind::kInvalidInput, "empty query");
  if (k_override && *k_override == kDefaultK) {
    throw Error(ErrorKind::kInvalidInput, "k override must be below 255");
  }
  if (!channel_) throw Error(ErrorKind::kProtocol, "session is not established");

  const std::uint8_t k_byte = k_override.value_or(kDefaultK);
  const std::uint8_t ad[2] = {static_cast<std::uint8_t>(FrameType::kRequest), k_byte};
  Bytes payload{k_byte};
  Bytes sealed = channel_->seal(as_bytes(text), ad);
  payload.insert(payload.end(), sealed.begin(), sealed.end());
  transport_->send(encode_frame(FrameType::kRequest, payload));
}

QueryResponse BrokerSession::receive_response() {
  if (!channel_) throw Error(ErrorKind::kProtocol, "session is not established");
  Frame reply = read_frame();
  const std::uint8_t rad[1] = {static_cast<std::uint8_t>(reply.type)};
  if (reply.type != FrameType::kResponse && reply.type != FrameType::kError) {
    throw Error(ErrorKind::kProtocol, "unexpected frame type");
  }
  Bytes plain = channel_->open(reply.payload, rad);
  if (reply.type == FrameType::kError) throw_proxy_error(error_kind_of(as_text(plain)));
  return parse_query_response(as_text(plain));
}

QueryResponse parse_query_response(std::string_view json) {
  QueryResponse out;
  try {
    auto j = nlohmann::json::parse(json);
    out.k_effective = j.at("k_effective").get<std::size_t>();
    out.results = results_from_json(j.at("results"));
    out.degraded = j.value("degraded", false);
    out.partial = j.value("partial", false);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kProtocol, std::string("bad response document: ") + e.what());
  }
  out.raw_json = std::string(json);
  return out;
}

}  // namespace xsearch
