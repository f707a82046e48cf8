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

#include "xsearch/http_engine.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>

#include <nlohmann/json.hpp>

#include "xsearch/error.hpp"

namespace xsearch {

namespace {

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string json_string(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  return (it != j.end() && it->is_string()) ? it->get<std::string>() : std::string();
}

void append_valid(ResultSet& out, SearchResult r) {
  if (is_valid_url(r.url)) out.push_back(std::move(r));
}

std::string decode_entities(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '&') {
      out.push_back(s[i]);
      continue;
    }
    std::size_t semi = s.find(';', i);
    if (semi == std::string_view::npos || semi - i > 10) {
      out.push_back('&');
      continue;
    }
    std::string_view ent = s.substr(i + 1, semi - i - 1);
    if (ent == "amp") out.push_back('&');
    else if (ent == "lt") out.push_back('<');
    else if (ent == "gt") out.push_back('>');
    else if (ent == "quot") out.push_back('"');
    else if (ent == "apos" || ent == "#39") out.push_back('\'');
    else if (ent == "nbsp") out.push_back(' ');
    else if (ent.size() > 1 && ent[0] == '#') {
      unsigned code = 0;
      bool hex = ent[1] == 'x' || ent[1] == 'X';
      std::string_view digits = ent.substr(hex ? 2 : 1);
      auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(),
                                     code, hex ? 16 : 10);
      if (ec != std::errc() || code == 0 || code > 0x7F) {
        out.append(s.substr(i, semi - i + 1));
      } else {
        out.push_back(static_cast<char>(code));
      }
    } else {
      out.append(s.substr(i, semi - i + 1));
    }
    i = semi;
  }
  return out;
}

std::string strip_tags(std::string_view s) {
  std::string out;
  bool in_tag = false;
  for (char c : s) {
    if (c == '<') in_tag = true;
    else if (c == '>') in_tag = false;
    else if (!in_tag) out.push_back(c);
  }
  return decode_entities(out);
}

std::optional<std::string_view> attribute(std::string_view tag, std::string_view name) {
  std::string pattern = std::string(name) + "=\"";
  std::size_t p = tag.find(pattern);
  if (p == std::string_view::npos) return std::nullopt;
  p += pattern.size();
  std::size_t end = tag.find('"', p);
  if (end == std::string_view::npos) return std::nullopt;
  return tag.substr(p, end - p);
}

}  // namespace

ResultSet JsonResultExtractor::extract(std::string_view body) const {
  nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorKind::kParse, "engine payload is not JSON");
  ResultSet out;
  if (j.is_object() && j.contains("webPages")) {
    const auto& value = j["webPages"]["value"];
    if (!value.is_array()) throw Error(ErrorKind::kParse, "webPages.value missing");
    for (const auto& item : value) {
      append_valid(out, {json_string(item, "name"), json_string(item, "snippet"),
                         json_string(item, "url")});
    }
    return out;
  }
  const nlohmann::json* items = &j;
  if (j.is_object()) {
    auto it = j.find("results");
    if (it == j.end()) throw Error(ErrorKind::kParse, "payload has no results array");
    items = &*it;
  }
  if (!items->is_array()) throw Error(ErrorKind::kParse, "results is not an array");
  for (const auto& item : *items) {
    if (!item.is_object()) throw Error(ErrorKind::kParse, "result is not an object");
    append_valid(out, {json_string(item, "title"), json_string(item, "desc"),
                       json_string(item, "url")});
  }
  return out;
}

ResultSet HtmlResultExtractor::extract(std::string_view body) const {
  static constexpr std::string_view kBlock = "class=\"b_algo\"";
  ResultSet out;
  std::size_t pos = body.find(kBlock);
  while (pos != std::string_view::npos) {
    std::size_t next = body.find(kBlock, pos + kBlock.size());
    std::string_view block = body.substr(pos, next == std::string_view::npos
                                                   ? std::string_view::npos
                                                   : next - pos);
    SearchResult r;
    std::size_t a = block.find("<a ");
    if (a != std::string_view::npos) {
      std::size_t tag_end = block.find('>', a);
      std::size_t close = block.find("</a>", a);
      if (tag_end != std::string_view::npos && close != std::string_view::npos &&
          tag_end < close) {
        std::string_view tag = block.substr(a, tag_end - a);
        if (auto href = attribute(tag, "href")) r.url = decode_entities(*href);
        r.title = strip_tags(block.substr(tag_end + 1, close - tag_end - 1));
      }
    }
    std::size_t p = block.find("<p");
    if (p != std::string_view::npos) {
      std::size_t start = block.find('>', p);
      std::size_t end = block.find("</p>", p);
      if (start != std::string_view::npos && end != std::string_view::npos && start < end) {
        r.desc = strip_tags(block.substr(start + 1, end - start - 1));
      }
    }
    append_valid(out, std::move(r));
    pos = next;
  }
  return out;
}

std::shared_ptr<const ResultExtractor> make_extractor(std::string_view name) {
  if (name == "json") return std::make_shared<JsonResultExtractor>();
  if (name == "html") return std::make_shared<HtmlResultExtractor>();
  throw Error(ErrorKind::kInvalidInput, "unknown extractor '" + std::string(name) + "'");
}

HttpResponse parse_http_response(std::string_view raw) {
  std::size_t header_end = raw.find("\r\n\r\n");
  if (header_end == std::string_view::npos) {
    throw Error(ErrorKind::kParse, "incomplete HTTP response header");
  }
  std::string_view head = raw.substr(0, header_end);
  std::string_view rest = raw.substr(header_end + 4);

  HttpResponse resp;
  std::size_t eol = head.find("\r\n");
  std::string_view status_line = head.substr(0, eol);
  if (status_line.rfind("HTTP/1.", 0) != 0 || status_line.size() < 12) {
    throw Error(ErrorKind::kParse, "malformed HTTP status line");
  }
  std::string_view code = status_line.substr(9, 3);
  auto [p, ec] = std::from_chars(code.data(), code.data() + 3, resp.status);
  if (ec != std::errc()) throw Error(ErrorKind::kParse, "malformed HTTP status code");

  while (eol != std::string_view::npos) {
    std::size_t start = eol + 2;
    eol = head.find("\r\n", start);
    std::string_view line = head.substr(start, eol == std::string_view::npos
                                                   ? std::string_view::npos
                                                   : eol - start);
    std::size_t colon = line.find(':');
    if (colon == std::string_view::npos) continue;
    resp.headers[lowercase(line.substr(0, colon))] = std::string(trim(line.substr(colon + 1)));
  }

  auto te = resp.headers.find("transfer-encoding");
  if (te != resp.headers.end() && lowercase(te->second).find("chunked") != std::string::npos) {
    std::size_t pos = 0;
    while (true) {
      std::size_t line_end = rest.find("\r\n", pos);
      if (line_end == std::string_view::npos) throw Error(ErrorKind::kParse, "truncated chunk");
      std::string_view size_text = rest.substr(pos, line_end - pos);
      size_text = size_text.substr(0, size_text.find(';'));
      std::size_t size = 0;
      auto [sp, sec] = std::from_chars(size_text.data(), size_text.data() + size_text.size(),
                                       size, 16);
      if (sec != std::errc()) throw Error(ErrorKind::kParse, "bad chunk size");
      pos = line_end + 2;
      if (size == 0) break;
      if (pos + size > rest.size()) throw Error(ErrorKind::kParse, "truncated chunk body");
      resp.body.append(rest.substr(pos, size));
      pos += size + 2;
    }
    return resp;
  }
  auto cl = resp.headers.find("content-length");
  if (cl != resp.headers.end()) {
    std::size_t len = 0;
    auto [lp, lec] = std::from_chars(cl->second.data(), cl->second.data() + cl->second.size(), len);
    if (lec != std::errc()) throw Error(ErrorKind::kParse, "bad Content-Length");
    if (rest.size() < len) throw Error(ErrorKind::kParse, "truncated HTTP body");
    resp.body = std::string(rest.substr(0, len));
  } else {
    resp.body = std::string(rest);
  }
  return resp;
}

HttpEngine::HttpEngine(SocketOps& sockets, HttpEngineOptions options)
    : sockets_(sockets), options_(std::move(options)), url_(parse_http_url(options_.base_url)) {
  if (url_.scheme != "http") {
    throw Error(ErrorKind::kInvalidInput,
                "only plain http engine URLs are supported by the socket client");
  }
  if (!options_.extractor) options_.extractor = std::make_shared<JsonResultExtractor>();
}

std::string HttpEngine::build_request(std::string_view query_text) const {
  std::string target = url_.target;
  target += (target.find('?') == std::string::npos) ? '?' : '&';
  target += options_.param;
  target += '=';
  target += percent_encode(query_text);

  std::string req = "GET " + target + " HTTP/1.1\r\nHost: " + url_.host;
  if (url_.port != 80) req += ":" + std::to_string(url_.port);
  req += "\r\nUser-Agent: xsearch\r\nAccept: */*\r\nConnection: close\r\n";
  for (const auto& [name, value] : options_.headers) req += name + ": " + value + "\r\n";
  req += "\r\n";
  return req;
}

ResultSet HttpEngine::fetch(std::string_view query_text) {
  const std::string request = build_request(query_text);
  SocketHandle sock = sockets_.connect(url_.host, url_.port);
  std::string raw;
  try {
    sockets_.send(sock, {reinterpret_cast<const std::uint8_t*>(request.data()), request.size()});
    std::array<std::uint8_t, 16384> buf{};
    while (true) {
      std::size_t n = sockets_.recv(sock, buf);
      if (n == 0) break;
      raw.append(reinterpret_cast<const char*>(buf.data()), n);
      if (raw.size() > options_.max_response_bytes) {
        throw Error(ErrorKind::kParse, "engine response too large");
      }
    }
  } catch (...) {
    sockets_.close(sock);
    throw;
  }
  sockets_.close(sock);

  HttpResponse resp = parse_http_response(raw);
  if (resp.status == 429) {
    throw Error(ErrorKind::kRateLimited, "engine rate limit (HTTP 429)");
  }
  if (resp.status < 200 || resp.status >= 300) {
    throw Error(ErrorKind::kHttpStatus, "engine returned HTTP " + std::to_string(resp.status));
  }
  return options_.extractor->extract(resp.body);
}

}  // namespace xsearch
