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

#include "confset/errors.h"

namespace confset {
namespace {

std::string Decorate(ErrorCode code, const std::string& message,
                     std::optional<std::size_t> line) {
  std::string out(ErrorCodeName(code));
  if (line) out += " (line " + std::to_string(*line) + ")";
  out += ": ";
  out += message;
  return out;
}

}  // namespace

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedRecord:
      return "MalformedRecord";
    case ErrorCode::kUnknownLabel:
      return "UnknownLabel";
    case ErrorCode::kInvalidConfig:
      return "InvalidConfig";
    case ErrorCode::kDuplicateRecord:
      return "DuplicateRecord";
    case ErrorCode::kProfileViolation:
      return "ProfileViolation";
    case ErrorCode::kInvalidOptions:
      return "InvalidOptions";
    case ErrorCode::kTransportError:
      return "TransportError";
    case ErrorCode::kCapabilityError:
      return "CapabilityError";
    case ErrorCode::kUnparseableAnswer:
      return "UnparseableAnswer";
    case ErrorCode::kIoError:
      return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> line)
    : std::runtime_error(Decorate(code, message, line)),
      code_(code),
      line_(line) {}

}  // namespace confset
