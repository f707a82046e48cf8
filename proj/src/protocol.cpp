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

#include "xsearch/protocol.hpp"

#include "xsearch/error.hpp"

namespace xsearch {

void put_u64_be(Bytes& out, std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) {
    out.push_back(static_cast<std::uint8_t>(v >> shift));
  }
}

std::uint64_t get_u64_be(std::span<const std::uint8_t> in) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < 8; ++i) v = (v << 8) | in[i];
  return v;
}

Bytes encode_frame(FrameType type, std::span<const std::uint8_t> payload) {
  Bytes out;
  out.reserve(kFrameHeaderBytes + payload.size());
  out.push_back(static_cast<std::uint8_t>(type));
  put_u64_be(out, payload.size());
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

void FrameDecoder::feed(std::span<const std::uint8_t> data) {
  if (pos_ > 0 && pos_ == buf_.size()) {
    buf_.clear();
    pos_ = 0;
  }
  buf_.insert(buf_.end(), data.begin(), data.end());
}

std::optional<Frame> FrameDecoder::next() {
  if (buffered() < kFrameHeaderBytes) return std::nullopt;
  std::span<const std::uint8_t> view(buf_.data() + pos_, buffered());
  std::uint8_t type = view[0];
  if (type < 1 || type > 4) {
    throw Error(ErrorKind::kProtocol, "unknown frame type " + std::to_string(type));
  }
  std::uint64_t len = get_u64_be(view.subspan(1));
  if (len > kMaxFramePayload) {
    throw Error(ErrorKind::kProtocol, "frame payload too large");
  }
  if (view.size() < kFrameHeaderBytes + len) return std::nullopt;
  Frame f{static_cast<FrameType>(type),
          Bytes(view.begin() + kFrameHeaderBytes,
                view.begin() + static_cast<std::ptrdiff_t>(kFrameHeaderBytes + len))};
  pos_ += kFrameHeaderBytes + len;
  if (pos_ == buf_.size()) {
    buf_.clear();
    pos_ = 0;
  } else if (pos_ > (1u << 16) && pos_ * 2 > buf_.size()) {
    buf_.erase(buf_.begin(), buf_.begin() + static_cast<std::ptrdiff_t>(pos_));
    pos_ = 0;
  }
  return f;
}

}  // namespace xsearch
