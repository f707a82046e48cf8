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

#include <mutex>
#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>

#include "xsearch/error.hpp"
#include "xsearch/http_engine.hpp"

namespace xsearch {
namespace {

const char* kCanned = R"({"results":[
  {"title":"One","desc":"first","url":"http://one.example/"},
  {"title":"Two","desc":"second","url":"http://two.example/"},
  {"title":"Three","desc":"third","url":"http://three.example/"}]})";

// Engine stand-in on an ephemeral loopback port.
class EngineFixture : public ::testing::Test {
 protected:
  void SetUp() override {
    server_.Get("/search", [this](const httplib::Request& req, httplib::Response& res) {
      {
        std::lock_guard lock(mu_);
        last_target_ = req.target;
        last_query_ = req.get_param_value("q");
        last_key_ = req.get_header_value("X-Api-Key");
      }
      res.set_content(kCanned, "application/json");
    });
    server_.Get("/limited", [](const httplib::Request&, httplib::Response& res) {
      res.status = 429;
      res.set_content("slow down", "text/plain");
    });
    server_.Get("/broken", [](const httplib::Request&, httplib::Response& res) {
      res.status = 503;
    });
    server_.Get("/garbage", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("<<not json>>", "application/json");
    });
    server_.Get("/serp", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(
          "<html><ol id=\"b_results\">"
          "<li class=\"b_algo\"><h2><a href=\"https://a.example/x?y=1&amp;z=2\">Alpha "
          "<strong>beta</strong></a></h2><div><p>Snippet &amp; more</p></div></li>"
          "<li class=\"b_algo\"><h2><a href=\"https://b.example/\">Second</a></h2>"
          "<p>two</p></li></ol></html>",
          "text/html");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  void TearDown() override {
    server_.stop();
    thread_.join();
  }

  HttpEngineOptions options(const std::string& path) {
    HttpEngineOptions o;
    o.base_url = "http://127.0.0.1:" + std::to_string(port_) + path;
    return o;
  }

  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::mutex mu_;
  std::string last_target_, last_query_, last_key_;
  PosixSocketOps sockets_{std::chrono::seconds(5)};
};

TEST_F(EngineFixture, ParsesCannedPayload) {
  HttpEngine engine(sockets_, options("/search"));
  auto rs = engine.fetch("cheap flights");
  ASSERT_EQ(rs.size(), 3u);
  EXPECT_EQ(rs[0], (SearchResult{"One", "first", "http://one.example/"}));
  EXPECT_EQ(rs[2].url, "http://three.example/");
  std::lock_guard lock(mu_);
  EXPECT_EQ(last_query_, "cheap flights");
}

TEST_F(EngineFixture, QueryIsPercentEncoded) {
  HttpEngine engine(sockets_, options("/search"));
  EXPECT_NE(engine.build_request("a b&c").find("GET /search?q=a%20b%26c HTTP/1.1\r\n"),
            std::string::npos);
  engine.fetch("a b&c");
  std::lock_guard lock(mu_);
  EXPECT_EQ(last_target_, "/search?q=a%20b%26c");
  EXPECT_EQ(last_query_, "a b&c");
}

TEST_F(EngineFixture, SendsConfiguredHeaders) {
  auto o = options("/search");
  o.headers = {{"X-Api-Key", "sekret"}};
  HttpEngine engine(sockets_, o);
  engine.fetch("x");
  std::lock_guard lock(mu_);
  EXPECT_EQ(last_key_, "sekret");
}

TEST_F(EngineFixture, RateLimitIsDistinctAndRetriable) {
  HttpEngine engine(sockets_, options("/limited"));
  try {
    engine.fetch("x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kRateLimited);
    EXPECT_TRUE(e.retriable());
  }
}

TEST_F(EngineFixture, HttpAndParseErrorsAreDistinct) {
  HttpEngine broken(sockets_, options("/broken"));
  HttpEngine garbage(sockets_, options("/garbage"));
  try {
    broken.fetch("x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kHttpStatus);
  }
  try {
    garbage.fetch("x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kParse);
  }
}

TEST_F(EngineFixture, HtmlExtractor) {
  auto o = options("/serp");
  o.extractor = make_extractor("html");
  HttpEngine engine(sockets_, o);
  auto rs = engine.fetch("alpha");
  ASSERT_EQ(rs.size(), 2u);
  EXPECT_EQ(rs[0], (SearchResult{"Alpha beta", "Snippet & more", "https://a.example/x?y=1&z=2"}));
  EXPECT_EQ(rs[1].title, "Second");
}

TEST(HttpEngineNetwork, RefusedConnectionIsNetworkError) {
  PosixSocketOps sockets(std::chrono::seconds(1));
  HttpEngineOptions o;
  o.base_url = "http://127.0.0.1:1/search";
  HttpEngine engine(sockets, o);
  try {
    engine.fetch("x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNetwork);
  }
}

TEST(HttpEngineNetwork, HttpsNeedsTlsAndIsRejected) {
  PosixSocketOps sockets;
  HttpEngineOptions o;
  o.base_url = "https://www.bing.com/search";
  EXPECT_THROW(HttpEngine(sockets, o), Error);
}

TEST(HttpResponseParser, ChunkedAndLengthBodies) {
  auto r = parse_http_response(
      "HTTP/1.1 200 OK\r\nTransfer-Encoding: chunked\r\n\r\n"
      "5\r\nhello\r\n6\r\n world\r\n0\r\n\r\n");
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(r.body, "hello world");
  auto l = parse_http_response("HTTP/1.0 404 Not Found\r\nContent-Length: 3\r\n\r\nabcdef");
  EXPECT_EQ(l.status, 404);
  EXPECT_EQ(l.body, "abc");
  EXPECT_THROW(parse_http_response("garbage"), Error);
}

TEST(JsonExtractor, AcceptsApiShapes) {
  JsonResultExtractor x;
  EXPECT_EQ(x.extract(R"([{"title":"a","desc":"b","url":"http://c"}])").size(), 1u);
  auto bing = x.extract(
      R"({"webPages":{"value":[{"name":"N","snippet":"S","url":"http://u"}]}})");
  ASSERT_EQ(bing.size(), 1u);
  EXPECT_EQ(bing[0], (SearchResult{"N", "S", "http://u"}));
}

}  // namespace
}  // namespace xsearch
