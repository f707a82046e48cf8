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

// xsearch-proxy: loads the trusted module and serves brokers over TCP.

#include <csignal>
#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "xsearch/enclave_host.hpp"
#include "xsearch/error.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::vector<std::string> settings;
  std::string enclave;
  std::string platform_key_file;
  bool print_only = false;
};

}  // namespace

int main(int argc, char** argv) {
  using namespace xsearch;
  CLI::App app{"Private web search proxy"};
  Overrides o;
  app.add_option("-c,--config", o.config_path, "Config file (key=value lines or JSON)");
  app.add_option("-s,--set", o.settings, "Override a config key, e.g. --set k=2");
  app.add_option("--enclave", o.enclave, "Trusted module to load");
  app.add_option("--platform-key-file", o.platform_key_file,
                 "Quoting key seed (hex); created when absent");
  app.add_flag("--print-measurement", o.print_only,
               "Print the measurement and platform key, then exit");
  CLI11_PARSE(app, argc, argv);

  try {
    ProxyConfig cfg = o.config_path.empty() ? ProxyConfig{} : ProxyConfig::load(o.config_path);
    for (const auto& kv : o.settings) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) throw Error(ErrorKind::kInvalidInput, "--set expects key=value");
      cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!o.enclave.empty()) cfg.enclave_path = o.enclave;
    if (cfg.enclave_path.empty()) cfg.enclave_path = XSEARCH_DEFAULT_ENCLAVE;
    if (!o.platform_key_file.empty()) cfg.platform_key_file = o.platform_key_file;

    PlatformQuoter quoter = cfg.platform_key_file.empty()
                                ? PlatformQuoter::generate()
                                : PlatformQuoter::load_or_create(cfg.platform_key_file);
    EnclaveHost host(cfg.enclave_path, quoter, cfg.engine_timeout);
    std::cout << "measurement " << to_hex(host.measurement()) << '\n'
              << "platform_key " << to_hex(host.platform_key()) << std::endl;
    if (o.print_only) return 0;

    host.init(make_trusted_params(cfg));

    // Block the stop signals before any thread starts so only sigwait sees them.
    sigset_t stop;
    sigemptyset(&stop);
    sigaddset(&stop, SIGINT);
    sigaddset(&stop, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &stop, nullptr);

    ProxyServer server(host, cfg.listen_addr);
    server.start();
    std::cout << "listening " << cfg.listen_addr.substr(0, cfg.listen_addr.rfind(':')) << ':'
              << server.port() << " k=" << cfg.k << " backend=" << to_string(cfg.backend)
              << std::endl;
    int sig = 0;
    sigwait(&stop, &sig);
    std::cout << "stopping on signal " << sig << std::endl;
    server.stop();
    return 0;
  } catch (const Error& e) {
    std::cerr << "xsearch-proxy: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return 1;
  }
}
