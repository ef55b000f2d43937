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
// Run configuration shared by every subcommand, resolved from flags,
// TESTAUG_* environment variables, a JSON config file and defaults.

#ifndef TESTAUG_RUN_CONFIG_H_
#define TESTAUG_RUN_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "testaug/project_model.h"

namespace testaug {

struct RunConfig {
  fs::path workspace_root = ".";
  std::size_t n_samples = 40;
  std::size_t max_len = 64;
  std::int64_t timeout_secs = 60;
  std::uint64_t rng_seed = 0;
  std::size_t token_budget = 512;
  fs::path output_dir = "testaug-out";
  // Bound on every worker pool.
  std::size_t jobs = 1;
  std::optional<fs::path> cargo_target_dir;
  std::string fuzz_command = "cargo fuzz";
  std::optional<fs::path> llvm_tools_dir;
};

// Field name -> textual value, e.g. {"n_samples", "5"}.
using ConfigLayer = std::map<std::string, std::string>;

// Names accepted in every layer; the environment variable for a field is
// TESTAUG_ followed by the upper-cased name.
const std::vector<std::string>& ConfigFieldNames();

// Reads a JSON object whose keys are field names. Throws
// Error(kInvalidArgument) for unknown keys or non-scalar values and
// Error(kIoError) when the file cannot be read.
ConfigLayer ReadConfigFile(const fs::path& path);

ConfigLayer EnvironmentLayer(
    const std::function<const char*(const char*)>& getenv);

// Later layers win: defaults < file < env < flags. Throws
// Error(kInvalidArgument) for values that do not parse or are out of range.
RunConfig ResolveConfig(const ConfigLayer& file, const ConfigLayer& env,
                        const ConfigLayer& flags);

std::string ResolvedConfigJson(const RunConfig& cfg);

}  // namespace testaug

#endif  // TESTAUG_RUN_CONFIG_H_
