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

#include <stdexcept>
#include <string>
#include <string_view>

namespace xsearch {

enum class ErrorKind {
  kInvalidInput,
  kHistoryEmpty,
  kParse,
  kIo,
  kNetwork,
  kHttpStatus,
  kRateLimited,
  kBackend,
  kProtocol,
  kReplay,
  kAuthentication,
  kMeasurementMismatch,
  kSignatureInvalid,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// Rate limits and transient network failures may be retried.
  bool retriable() const noexcept {
    return kind_ == ErrorKind::kRateLimited || kind_ == ErrorKind::kNetwork;
  }

 private:
  ErrorKind kind_;
};

}  // namespace xsearch
