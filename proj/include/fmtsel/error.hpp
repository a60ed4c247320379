// Copyright 2026 The fmtsel Authors.
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

namespace fmtsel {

enum class ErrorCode {
  kInvalidProfile,
  kDegenerateProfile,
  kInvalidStats,
  kKindMismatch,
  kIncompleteGeometry,
  kPrecondition,
  kEmptyTable,
  kModeMismatch,
  kUnknownFormat,
  kUnsupportedFormat,
  kParseError,
  kCycleDetected,
  kUnknownOperationKind,
  kInconsistentStats,
  kIncompleteStats,
  kEmptyOpList,
  kIoError,
  kSchemaVersionMismatch,
};

inline const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidProfile: return "invalid-profile";
    case ErrorCode::kDegenerateProfile: return "degenerate-profile";
    case ErrorCode::kInvalidStats: return "invalid-stats";
    case ErrorCode::kKindMismatch: return "kind-mismatch";
    case ErrorCode::kIncompleteGeometry: return "incomplete-geometry";
    case ErrorCode::kPrecondition: return "precondition";
    case ErrorCode::kEmptyTable: return "empty-table";
    case ErrorCode::kModeMismatch: return "mode-mismatch";
    case ErrorCode::kUnknownFormat: return "unknown-format";
    case ErrorCode::kUnsupportedFormat: return "unsupported-format";
    case ErrorCode::kParseError: return "parse-error";
    case ErrorCode::kCycleDetected: return "cycle-detected";
    case ErrorCode::kUnknownOperationKind: return "unknown-operation-kind";
    case ErrorCode::kInconsistentStats: return "inconsistent-stats";
    case ErrorCode::kIncompleteStats: return "incomplete-stats";
    case ErrorCode::kEmptyOpList: return "empty-op-list";
    case ErrorCode::kIoError: return "io-error";
    case ErrorCode::kSchemaVersionMismatch: return "schema-version-mismatch";
  }
  return "unknown";
}

// All library failures surface as this exception; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fmtsel
