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

#ifndef TESTAUG_PROCESS_H_
#define TESTAUG_PROCESS_H_

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace testaug {

struct ProcessSpec {
  std::vector<std::string> argv;
  std::filesystem::path cwd;
  // Added to (or overriding) the parent environment.
  std::vector<std::pair<std::string, std::string>> env;
  std::optional<std::chrono::milliseconds> timeout;
  // Grace period between SIGTERM and SIGKILL once the timeout fires.
  std::chrono::milliseconds kill_grace{2000};
};

struct ProcessResult {
  int exit_code = -1;  // valid when !signaled
  int term_signal = 0;
  bool signaled = false;
  bool timed_out = false;
  std::string out;
  std::string err;

  bool ok() const { return !signaled && !timed_out && exit_code == 0; }
};

// Runs the command to completion in its own process group. Throws
// Error(kToolchainMissing) if argv[0] cannot be executed and Error(kIoError)
// if the process cannot be started.
ProcessResult RunProcess(const ProcessSpec& spec);

// Resolves an executable name against PATH (or returns it unchanged if it
// already contains a slash and is executable).
std::optional<std::filesystem::path> FindExecutable(const std::string& name);

// Splits a command line on whitespace; no quoting rules.
std::vector<std::string> SplitCommand(const std::string& command);

}  // namespace testaug

#endif  // TESTAUG_PROCESS_H_
