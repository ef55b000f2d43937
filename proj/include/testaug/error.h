// Copyright 2026 The testaug Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TESTAUG_ERROR_H_
#define TESTAUG_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace testaug {

enum class ErrorCode {
  kMissingManifest,
  kIoError,
  kToolchainMissing,
  kParseError,
  kMultipleTargets,
  kUnsupportedParam,
  kAlreadyInstrumented,
  kFuzzBuildFailed,
  kFuzzRunFailed,
  kSinkUnreadable,
  kTokenizerUnavailable,
  kUnrepairable,
  kHarnessBuildFailed,
  kCoverageToolMissing,
  kCoverageParseError,
  kInvalidArgument,
};

std::string_view ErrorCodeName(ErrorCode code);

// True for failures caused by the host environment (missing tools, broken
// builds) rather than by user input. The CLI maps these to exit status 2.
bool IsEnvironmentError(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace testaug

#endif  // TESTAUG_ERROR_H_
