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

#include <filesystem>
#include <memory>
#include <string>

#include "xsearch/bench/load.hpp"
#include "xsearch/enclave_host.hpp"

namespace xsearch::testing {

/// A full proxy (shared-object enclave behind TCP) on an ephemeral port.
class LiveProxy {
 public:
  LiveProxy(const std::filesystem::path& enclave, TrustedParams params)
      : host_(enclave, quoter_) {
    host_.init(params);
    server_ = std::make_unique<ProxyServer>(host_, "127.0.0.1:0");
    server_->start();
  }
  ~LiveProxy() { server_->stop(); }

  std::string addr() const { return "127.0.0.1:" + std::to_string(server_->port()); }
  const Digest& measurement() const { return host_.measurement(); }
  const Key32& platform_key() const { return host_.platform_key(); }
  bench::LoadTarget target() const { return {addr(), measurement(), platform_key()}; }

  static TrustedParams echo_params(std::size_t k = 0) {
    TrustedParams p;
    p.k = k;
    p.backend = BackendKind::kEcho;
    p.seed_queries = {"seed one", "seed two", "seed three"};
    return p;
  }

 private:
  PlatformQuoter quoter_ = PlatformQuoter::from_seed(Key32{11});
  EnclaveHost host_;
  std::unique_ptr<ProxyServer> server_;
};

}  // namespace xsearch::testing
