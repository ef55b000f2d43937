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

#include "testaug/error.h"

namespace testaug {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingManifest: return "MissingManifest";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kToolchainMissing: return "ToolchainMissing";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kMultipleTargets: return "MultipleTargets";
    case ErrorCode::kUnsupportedParam: return "UnsupportedParam";
    case ErrorCode::kAlreadyInstrumented: return "AlreadyInstrumented";
    case ErrorCode::kFuzzBuildFailed: return "FuzzBuildFailed";
    case ErrorCode::kFuzzRunFailed: return "FuzzRunFailed";
    case ErrorCode::kSinkUnreadable: return "SinkUnreadable";
    case ErrorCode::kTokenizerUnavailable: return "TokenizerUnavailable";
    case ErrorCode::kUnrepairable: return "Unrepairable";
    case ErrorCode::kHarnessBuildFailed: return "HarnessBuildFailed";
    case ErrorCode::kCoverageToolMissing: return "CoverageToolMissing";
    case ErrorCode::kCoverageParseError: return "CoverageParseError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

bool IsEnvironmentError(ErrorCode code) {
  switch (code) {
    case ErrorCode::kToolchainMissing:
    case ErrorCode::kFuzzBuildFailed:
    case ErrorCode::kFuzzRunFailed:
    case ErrorCode::kHarnessBuildFailed:
    case ErrorCode::kCoverageToolMissing:
    case ErrorCode::kTokenizerUnavailable:
      return true;
    default:
      return false;
  }
}

}  // namespace testaug
