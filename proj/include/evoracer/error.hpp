// Copyright 2026 The evoracer Authors.
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

namespace evoracer {

enum class ErrorCode {
  kInvalidArgument,
  kMissingKey,
  kTypeMismatch,
  kRangeViolation,
  kUnreadableFile,
  kFileNotFound,
  kSchemaViolation,
  kNotFound,
  kAmbiguous,
  kStaleLocator,
  kSignatureMismatch,
  kNoCodeBlock,
  kSignatureAbsent,
  kProviderFailure,
  kAuthFailure,
  kToolMissing,
  kInfeasiblePool,
  kFatalEnvironment,
  kValidationFailed,
  kMalformedInput,
};

const char* error_code_name(ErrorCode code);

// Single exception type for the library. The code carries the error kind, the
// message carries human context (paths, field names, counts).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace evoracer
