// Copyright 2026 The Janus Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
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

namespace janus {

enum class ErrorCode {
  kAllFilesFailed,
  kIoError,
  kXmlMalformed,
  kNotASchema,
  kEmptyName,
  kEmptyTerm,
  kUnknownId,
  kInvalidNetwork,
  kUnsupportedFormat,
  kInvalidParams,
  kVersionMismatch,
  kParseError,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kAllFilesFailed: return "AllFilesFailed";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kXmlMalformed: return "XmlMalformed";
    case ErrorCode::kNotASchema: return "NotASchema";
    case ErrorCode::kEmptyName: return "EmptyName";
    case ErrorCode::kEmptyTerm: return "EmptyTerm";
    case ErrorCode::kUnknownId: return "UnknownId";
    case ErrorCode::kInvalidNetwork: return "InvalidNetwork";
    case ErrorCode::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kVersionMismatch: return "VersionMismatch";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (CLI, HTTP layer) can map it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Parameter validation failure that names the offending field.
class InvalidParams : public Error {
 public:
  InvalidParams(std::string field, const std::string& message)
      : Error(ErrorCode::kInvalidParams, field + ": " + message),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace janus
