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
#include "testaug/run_config.h"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "json.hpp"
#include "testaug/error.h"

namespace testaug {
namespace {

using json = nlohmann::ordered_json;

template <typename T>
T ParseUnsigned(const std::string& field, const std::string& value,
                T min_value) {
  T out{};
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (value.empty() || ec != std::errc() || ptr != end || out < min_value) {
    throw Error(ErrorCode::kInvalidArgument,
                field + " must be an integer >= " + std::to_string(min_value) +
                    ", got '" + value + "'");
  }
  return out;
}

std::optional<fs::path> OptionalPath(const std::string& value) {
  if (value.empty()) return std::nullopt;
  return fs::path(value);
}

}  // namespace

const std::vector<std::string>& ConfigFieldNames() {
  static const std::vector<std::string> kNames = {
      "workspace_root", "n_samples",        "max_len",
      "timeout_secs",   "rng_seed",         "token_budget",
      "output_dir",     "jobs",             "cargo_target_dir",
      "fuzz_command",   "llvm_tools_dir"};
  return kNames;
}

ConfigLayer ReadConfigFile(const fs::path& path) {
  const json doc = json::parse(ReadFileText(path), nullptr, false);
  if (!doc.is_object()) {
    throw Error(ErrorCode::kInvalidArgument,
                path.string() + ": config must be a JSON object");
  }
  const auto& names = ConfigFieldNames();
  ConfigLayer layer;
  for (const auto& [key, value] : doc.items()) {
    if (std::find(names.begin(), names.end(), key) == names.end()) {
      throw Error(ErrorCode::kInvalidArgument,
                  path.string() + ": unknown config key " + key);
    }
    if (value.is_null()) continue;
    if (value.is_string()) {
      layer[key] = value.get<std::string>();
    } else if (value.is_number_unsigned()) {
      layer[key] = std::to_string(value.get<std::uint64_t>());
    } else {
      throw Error(ErrorCode::kInvalidArgument,
                  path.string() + ": " + key +
                      " must be a string or a non-negative integer");
    }
  }
  return layer;
}

ConfigLayer EnvironmentLayer(
    const std::function<const char*(const char*)>& getenv) {
  ConfigLayer layer;
  for (const std::string& name : ConfigFieldNames()) {
    std::string var = "TESTAUG_";
    for (char c : name) var.push_back(static_cast<char>(std::toupper(c)));
    if (const char* v = getenv(var.c_str())) layer[name] = v;
  }
  return layer;
}

RunConfig ResolveConfig(const ConfigLayer& file, const ConfigLayer& env,
                        const ConfigLayer& flags) {
  ConfigLayer merged = file;
  for (const ConfigLayer* layer : {&env, &flags}) {
    for (const auto& [k, v] : *layer) merged[k] = v;
  }
  RunConfig cfg;
  for (const auto& [k, v] : merged) {
    if (k == "workspace_root") {
      cfg.workspace_root = v;
    } else if (k == "n_samples") {
      cfg.n_samples = ParseUnsigned<std::size_t>(k, v, 1);
    } else if (k == "max_len") {
      cfg.max_len = ParseUnsigned<std::size_t>(k, v, 1);
    } else if (k == "timeout_secs") {
      cfg.timeout_secs = ParseUnsigned<std::int64_t>(k, v, 0);
    } else if (k == "rng_seed") {
      cfg.rng_seed = ParseUnsigned<std::uint64_t>(k, v, 0);
    } else if (k == "token_budget") {
      cfg.token_budget = ParseUnsigned<std::size_t>(k, v, 1);
    } else if (k == "output_dir") {
      cfg.output_dir = v;
    } else if (k == "jobs") {
      cfg.jobs = ParseUnsigned<std::size_t>(k, v, 1);
    } else if (k == "cargo_target_dir") {
      cfg.cargo_target_dir = OptionalPath(v);
    } else if (k == "fuzz_command") {
      cfg.fuzz_command = v;
    } else if (k == "llvm_tools_dir") {
      cfg.llvm_tools_dir = OptionalPath(v);
    } else {
      throw Error(ErrorCode::kInvalidArgument, "unknown config field " + k);
    }
  }
  if (cfg.workspace_root.empty() || cfg.output_dir.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "workspace_root and output_dir must not be empty");
  }
  if (cfg.fuzz_command.find_first_not_of(" \t") == std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument, "fuzz_command must not be empty");
  }
  return cfg;
}

std::string ResolvedConfigJson(const RunConfig& cfg) {
  const auto opt = [](const std::optional<fs::path>& p) {
    return p ? json(p->string()) : json(nullptr);
  };
  const json doc{{"workspace_root", cfg.workspace_root.string()},
                 {"n_samples", cfg.n_samples},
                 {"max_len", cfg.max_len},
                 {"timeout_secs", cfg.timeout_secs},
                 {"rng_seed", cfg.rng_seed},
                 {"token_budget", cfg.token_budget},
                 {"output_dir", cfg.output_dir.string()},
                 {"jobs", cfg.jobs},
                 {"cargo_target_dir", opt(cfg.cargo_target_dir)},
                 {"fuzz_command", cfg.fuzz_command},
                 {"llvm_tools_dir", opt(cfg.llvm_tools_dir)}};
  return doc.dump(2) + "\n";
}

}  // namespace testaug
