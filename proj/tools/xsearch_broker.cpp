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

// xsearch-broker: attests a proxy, sends one query and prints the results.

#include <iostream>
#include <iterator>

#include <CLI11.hpp>

#include "tool_common.hpp"
#include "xsearch/broker.hpp"
#include "xsearch/error.hpp"
#include "xsearch/text.hpp"

namespace {

enum Exit : int {
  kOk = 0,
  kUsage = 2,
  kAttestation = 3,
  kNetwork = 4,
  kEngine = 5,
  kProtocol = 6,
};

int exit_code_for(xsearch::ErrorKind kind) {
  using xsearch::ErrorKind;
  switch (kind) {
    case ErrorKind::kMeasurementMismatch:
    case ErrorKind::kSignatureInvalid:
      return kAttestation;
    case ErrorKind::kNetwork:
      return kNetwork;
    case ErrorKind::kBackend:
    case ErrorKind::kHttpStatus:
    case ErrorKind::kRateLimited:
      return kEngine;
    case ErrorKind::kInvalidInput:
      return kUsage;
    default:
      return kProtocol;
  }
}

void print_table(const xsearch::QueryResponse& r) {
  std::cout << r.results.size() << " results (k=" << r.k_effective
            << (r.degraded ? ", degraded" : "") << (r.partial ? ", partial" : "") << ")\n";
  std::size_t i = 0;
  for (const auto& doc : r.results) {
    std::cout << ++i << ". " << doc.title << "\n   " << doc.url << '\n';
    if (!doc.desc.empty()) std::cout << "   " << doc.desc << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  using namespace xsearch;
  CLI::App app{"Attested client for the private web search proxy"};
  std::string proxy = "127.0.0.1:8642";
  std::string measurement_hex;
  std::string platform_key_hex;
  int k = -1;
  bool json = false;
  std::vector<std::string> words;
  app.add_option("--proxy", proxy, "Proxy address host:port");
  app.add_option("--measurement", measurement_hex, "Expected measurement (64 hex)")->required();
  app.add_option("--platform-key", platform_key_hex, "Pin the platform key (64 hex)");
  app.add_option("--k", k, "Per-request decoy count")->check(CLI::Range(0, 254));
  app.add_flag("--json", json, "Print the response document");
  app.add_option("query", words, "Query text; read from stdin when absent");
  CLI11_PARSE(app, argc, argv);

  std::string text;
  for (const auto& w : words) text += (text.empty() ? "" : " ") + w;
  if (words.empty()) {
    text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
  }
  if (trim(text).empty()) {
    std::cerr << "xsearch-broker: empty query\n";
    return kUsage;
  }

  try {
    const Digest expected = digest_from_hex(measurement_hex);
    const auto pinned = tools::optional_key(platform_key_hex);
    auto session = BrokerSession::connect_and_attest(proxy, expected, pinned);
    std::optional<std::uint8_t> k_override;
    if (k >= 0) k_override = static_cast<std::uint8_t>(k);
    QueryResponse r = session.query(text, k_override);
    if (json) {
      std::cout << r.raw_json << '\n';
    } else {
      print_table(r);
    }
    return kOk;
  } catch (const Error& e) {
    std::cerr << "xsearch-broker: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return exit_code_for(e.kind());
  }
}
