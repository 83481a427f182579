// Copyright 2026 The confset Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CONFSET_ERRORS_H_
#define CONFSET_ERRORS_H_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace confset {

enum class ErrorCode {
  kMalformedRecord,
  kUnknownLabel,
  kInvalidConfig,
  kDuplicateRecord,
  kProfileViolation,
  kInvalidOptions,
  kTransportError,
  kCapabilityError,
  kUnparseableAnswer,
  kIoError,
};

std::string_view ErrorCodeName(ErrorCode code);

// Single exception type for the library. `line()` is set when the error is
// tied to a position in a line-delimited input file (1-based).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> line = std::nullopt);

  ErrorCode code() const { return code_; }
  std::optional<std::size_t> line() const { return line_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> line_;
};

}  // namespace confset

#endif  // CONFSET_ERRORS_H_
