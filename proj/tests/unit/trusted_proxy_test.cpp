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

#include <set>

#include <gtest/gtest.h>

#include "brute_force_filter.hpp"
#include "test_support.hpp"
#include "xsearch/broker.hpp"
#include "xsearch/filtering.hpp"
#include "xsearch/trusted_proxy.hpp"

namespace xsearch {
namespace {

using testing::CountingBackend;
using testing::InProcessTransport;
using testing::LoopbackRuntime;

ResultSet topic_corpus() {
  ResultSet docs;
  const std::vector<std::pair<std::string, std::vector<std::string>>> topics = {
      {"cars", {"engine", "wheel", "brake", "sedan"}},
      {"cooking", {"recipe", "oven", "flour", "sugar"}},
      {"astronomy", {"planet", "orbit", "comet", "telescope"}},
  };
  for (const auto& [topic, words] : topics) {
    for (std::size_t i = 0; i < words.size(); ++i) {
      for (std::size_t j = 0; j < words.size(); ++j) {
        if (i == j) continue;
        docs.push_back({words[i] + " " + words[j], topic + " " + words[i],
                        "http://" + topic + ".example/" + words[i] + "-" + words[j]});
      }
    }
  }
  return docs;
}

class ProxyTest : public ::testing::Test {
 protected:
  void start(TrustedParams p) {
    proxy_.init(p);
  }
  void start_with(TrustedParams p, std::unique_ptr<SearchBackend> b) {
    proxy_.init(p, std::move(b));
  }
  BrokerSession connect(SocketHandle sock) {
    return BrokerSession::connect_and_attest(
        std::make_unique<InProcessTransport>(proxy_, runtime_, sock), runtime_.measurement(),
        runtime_.platform_key());
  }

  LoopbackRuntime runtime_;
  TrustedProxy proxy_{runtime_};
};

TEST_F(ProxyTest, KZeroReturnsMockAnswerVerbatim) {
  TrustedParams p;
  p.k = 0;
  p.corpus = topic_corpus();
  p.seed_queries = {"planet orbit", "oven recipe"};
  start(p);
  MockCorpus direct(p.corpus);
  auto session = connect(1);
  for (const char* q : {"engine brake", "comet telescope", "sugar", "nothing matches"}) {
    auto r = session.query(q);
    EXPECT_EQ(r.k_effective, 0u);
    EXPECT_EQ(to_json(r.results).dump(), to_json(direct.search(q, 20)).dump()) << q;
  }
}

TEST_F(ProxyTest, K2KeepsOnlyRealTopic) {
  TrustedParams p;
  p.k = 2;
  p.corpus = topic_corpus();
  p.seed_queries = {"planet orbit", "oven recipe", "comet", "flour sugar"};
  p.rng_seed = 3;
  start(p);
  MockCorpus direct(p.corpus);
  auto session = connect(1);
  for (int i = 0; i < 10; ++i) {
    auto r = session.query("engine brake");
    EXPECT_EQ(r.k_effective, 2u);
    ASSERT_FALSE(r.results.empty());
    for (const auto& res : r.results) {
      EXPECT_TRUE(res.url.starts_with("http://cars.example/")) << res.url;
    }
  }
}

TEST_F(ProxyTest, EngineSeesOnlySubQueries) {
  auto backend = std::make_unique<CountingBackend>(ResultSet{});
  auto* raw = backend.get();
  TrustedParams p;
  p.k = 3;
  p.seed_queries = {"alpha", "beta"};
  start_with(p, std::move(backend));
  auto session = connect(4);
  auto r = session.query("gamma ray");
  EXPECT_EQ(r.k_effective, 3u);
  ASSERT_EQ(raw->last_sub_queries.size(), 4u);
  std::set<std::string> allowed = {"alpha", "beta", "gamma ray"};
  for (const auto& s : raw->last_sub_queries) EXPECT_TRUE(allowed.contains(s)) << s;
}

TEST_F(ProxyTest, KOverridePerRequest) {
  TrustedParams p;
  p.k = 5;
  p.corpus = topic_corpus();
  p.seed_queries = {"planet"};
  start(p);
  auto session = connect(2);
  EXPECT_EQ(session.query("oven", 1).k_effective, 1u);
  EXPECT_EQ(session.query("oven").k_effective, 5u);
}

TEST_F(ProxyTest, EmptyHistoryDegradesAndFlags) {
  TrustedParams p;
  p.k = 3;
  p.corpus = topic_corpus();
  start(p);
  auto session = connect(2);
  auto r = session.query("oven");
  EXPECT_EQ(r.k_effective, 0u);
  EXPECT_TRUE(r.degraded);
  EXPECT_FALSE(session.query("flour").degraded);
}

TEST_F(ProxyTest, ReplayedRequestRejectedWithoutSearch) {
  auto backend = std::make_unique<CountingBackend>(ResultSet{});
  auto* raw = backend.get();
  TrustedParams p;
  p.k = 1;
  p.seed_queries = {"seed"};
  start_with(p, std::move(backend));

  auto rec = std::make_unique<RecordingTransport>(
      std::make_unique<InProcessTransport>(proxy_, runtime_, 9));
  auto* recorder = rec.get();
  auto session = BrokerSession::connect_and_attest(std::move(rec), runtime_.measurement());
  const std::size_t handshake_bytes = recorder->sent().size();
  session.query("first");
  ASSERT_EQ(raw->calls, 1);

  // Re-inject the recorded request frame verbatim.
  Bytes request(recorder->sent().begin() + static_cast<std::ptrdiff_t>(handshake_bytes),
                recorder->sent().end());
  proxy_.request(9, request);
  EXPECT_EQ(raw->calls, 1);
  EXPECT_TRUE(runtime_.closed(9));
  EXPECT_GE(proxy_.stats().protocol_errors.load(), 1u);
}

TEST_F(ProxyTest, BackendFailureIsStructuredErrorAndQueryStillPushed) {
  auto backend = std::make_unique<CountingBackend>(ResultSet{});
  backend->fail = true;
  TrustedParams p;
  p.k = 1;
  p.seed_queries = {"seed"};
  start_with(p, std::move(backend));
  auto session = connect(3);
  try {
    session.query("doomed query");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kBackend);
  }
  EXPECT_EQ(proxy_.history().entries().back(), "doomed query");
}

TEST_F(ProxyTest, RequestBeforeHandshakeIsProtocolError) {
  TrustedParams p;
  p.backend = BackendKind::kEcho;
  start(p);
  Bytes junk = encode_frame(FrameType::kRequest, Bytes{255, 0, 0, 0, 0, 0, 0, 0, 1});
  proxy_.request(5, junk);
  EXPECT_TRUE(runtime_.closed(5));
  std::uint8_t buf[256];
  std::size_t n = runtime_.take(5, buf);
  ASSERT_GT(n, kFrameHeaderBytes);
  EXPECT_EQ(buf[0], static_cast<std::uint8_t>(FrameType::kError));
}

TEST_F(ProxyTest, EchoModeAnswersImmediately) {
  TrustedParams p;
  p.backend = BackendKind::kEcho;
  start(p);
  auto session = connect(6);
  auto r = session.query("anything");
  EXPECT_EQ(r.raw_json, R"({"k_effective":0,"results":[],"degraded":false,"partial":false})");
  EXPECT_EQ(proxy_.history().snapshot_len(), 0u);
}

TEST_F(ProxyTest, SessionsAreIndependentAndDroppedOnClose) {
  TrustedParams p;
  p.k = 0;
  p.corpus = topic_corpus();
  start(p);
  {
    auto a = connect(10);
    auto b = connect(11);
    a.query("oven");
    b.query("planet");
    EXPECT_EQ(proxy_.session_count(), 2u);
  }
  EXPECT_EQ(proxy_.session_count(), 0u);
}

TEST_F(ProxyTest, ResponseUrlsSanitized) {
  TrustedParams p;
  p.k = 0;
  p.corpus = {{"oven", "recipe", "https://r.engine.example/rd?u=https%3A%2F%2Fbake.org%2Fx"}};
  start(p);
  auto r = connect(1).query("oven");
  ASSERT_EQ(r.results.size(), 1u);
  EXPECT_EQ(r.results[0].url, "https://bake.org/x");
}

TEST(TrustedParamsJson, RoundTrip) {
  TrustedParams p;
  p.k = 4;
  p.backend = BackendKind::kLive;
  p.engine_url = "http://e/search";
  p.engine_headers = {{"X-Key", "v"}};
  p.corpus = {{"t", "d", "http://u"}};
  p.seed_queries = {"s1", "s2"};
  p.rng_seed = 17;
  p.redirect.prefix = "http://r/";
  auto back = TrustedParams::from_json(p.to_json());
  EXPECT_EQ(back.to_json(), p.to_json());
  auto bad = p.to_json();
  bad["history_capacity"] = 0;
  EXPECT_THROW(TrustedParams::from_json(bad), Error);
}

}  // namespace
}  // namespace xsearch
