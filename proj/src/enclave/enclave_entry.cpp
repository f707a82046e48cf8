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

// Entry points of the trusted component. Only the symbols declared in
// enclave_abi.h are exported from the shared object.

#include <exception>
#include <string>

#include "xsearch/enclave_abi.h"
#include "xsearch/error.hpp"
#include "xsearch/trusted_proxy.hpp"

namespace {

using xsearch::Error;
using xsearch::ErrorKind;

class OcallRuntime : public xsearch::UntrustedRuntime {
 public:
  explicit OcallRuntime(const xs_ocall_table& table) : t_(table) {}

  xsearch::SocketHandle connect(const std::string& host, std::uint16_t port) override {
    xs_sock_t s = t_.connect(t_.ctx, host.c_str(), port);
    if (s < 0) throw Error(ErrorKind::kNetwork, "connect to " + host + " failed");
    return s;
  }

  void send(xsearch::SocketHandle sock, std::span<const std::uint8_t> data) override {
    if (t_.send(t_.ctx, sock, data.data(), data.size()) < 0) {
      throw Error(ErrorKind::kNetwork, "send failed");
    }
  }

  std::size_t recv(xsearch::SocketHandle sock, std::span<std::uint8_t> buf) override {
    int64_t n = t_.recv(t_.ctx, sock, buf.data(), buf.size());
    if (n < 0) throw Error(ErrorKind::kNetwork, "recv failed");
    return static_cast<std::size_t>(n);
  }

  void close(xsearch::SocketHandle sock) override { t_.close(t_.ctx, sock); }

  xsearch::Evidence quote(const xsearch::Digest& report_data) override {
    std::uint8_t raw[XS_EVIDENCE_BYTES];
    if (t_.quote(t_.ctx, report_data.data(), raw) != XS_OK) {
      throw Error(ErrorKind::kProtocol, "platform quote failed");
    }
    return xsearch::Evidence::parse(raw);
  }

 private:
  xs_ocall_table t_;
};

}  // namespace

struct xs_enclave {
  explicit xs_enclave(const xs_ocall_table& table) : runtime(table), proxy(runtime) {}
  OcallRuntime runtime;
  xsearch::TrustedProxy proxy;
};

extern "C" {

__attribute__((visibility("default"))) xs_enclave* xs_enclave_create(
    const xs_ocall_table* ocalls) {
  if (ocalls == nullptr || !ocalls->connect || !ocalls->send || !ocalls->recv ||
      !ocalls->close || !ocalls->quote) {
    return nullptr;
  }
  try {
    return new xs_enclave(*ocalls);
  } catch (...) {
    return nullptr;
  }
}

__attribute__((visibility("default"))) void xs_enclave_destroy(xs_enclave* enclave) {
  delete enclave;
}

__attribute__((visibility("default"))) int xs_ecall_init(xs_enclave* enclave,
                                                         const char* params,
                                                         size_t len) {
  if (enclave == nullptr || params == nullptr) return XS_ERR_INVALID;
  try {
    auto j = nlohmann::json::parse(std::string_view(params, len));
    enclave->proxy.init(xsearch::TrustedParams::from_json(j));
    return XS_OK;
  } catch (const nlohmann::json::exception&) {
    return XS_ERR_INVALID;
  } catch (const Error& e) {
    return e.kind() == ErrorKind::kInvalidInput || e.kind() == ErrorKind::kParse
               ? XS_ERR_INVALID
               : XS_ERR_INTERNAL;
  } catch (...) {
    return XS_ERR_INTERNAL;
  }
}

__attribute__((visibility("default"))) int xs_ecall_request(xs_enclave* enclave,
                                                            xs_sock_t sock,
                                                            const uint8_t* buf,
                                                            size_t len) {
  if (enclave == nullptr || (len > 0 && buf == nullptr)) return XS_ERR_INVALID;
  try {
    enclave->proxy.request(sock, std::span<const std::uint8_t>(buf, len));
    return XS_OK;
  } catch (...) {
    return XS_ERR_INTERNAL;
  }
}

}  // extern "C"
