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
// The four subcommands as library calls. Each writes its artifacts and a
// resolved_config.json under cfg.output_dir and throws testaug::Error on
// failure.

#ifndef TESTAUG_PIPELINE_H_
#define TESTAUG_PIPELINE_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "testaug/dataset_builder.h"
#include "testaug/error.h"
#include "testaug/eval_harness.h"
#include "testaug/run_config.h"
#include "testaug/test_miner.h"

namespace testaug {

inline constexpr std::string_view kMinedPairsFile = "mined_pairs.jsonl";
inline constexpr std::string_view kAugmentedPairsFile = "augmented_pairs.jsonl";
inline constexpr std::string_view kAugmentedTestsDir = "augmented_tests";
inline constexpr std::string_view kDatasetFile = "dataset.jsonl";
inline constexpr std::string_view kEvalReportFile = "eval_report.json";
inline constexpr std::string_view kEvalTableFile = "eval_report.txt";
inline constexpr std::string_view kResolvedConfigFile = "resolved_config.json";

struct MineSummary {
  std::size_t packages = 0;
  MiningStats stats;
  std::vector<std::string> diagnostics;
  fs::path pairs_file;
};

MineSummary CmdMine(const RunConfig& cfg);

struct TargetReport {
  std::string package;
  std::string target_id;
  std::string param_type;
  // "ok", "unsupported", "run-failed" or "unpaired".
  std::string status;
  std::size_t harvested = 0;
  std::size_t eligible = 0;
  std::size_t tests = 0;
  std::size_t pairs = 0;
  std::string message;
};

struct AugmentSummary {
  std::size_t packages = 0;
  std::size_t targets = 0;
  std::size_t seeds_harvested = 0;
  std::size_t tests_generated = 0;
  std::size_t pairs_formed = 0;
  std::vector<TargetReport> per_target;
  std::vector<std::string> diagnostics;
  fs::path pairs_file;
};

// Instrument, fuzz, select, transform, instantiate and pair for every
// package under cfg.workspace_root. A package whose fuzz harness fails to
// build aborts the run with Error(kFuzzBuildFailed); a target whose run
// fails is reported and skipped.
AugmentSummary CmdAugment(const RunConfig& cfg);

struct BuildInputs {
  // Defaults to the pair files of a previous mine/augment in output_dir;
  // missing default files are skipped, missing explicit ones are errors.
  std::optional<fs::path> mined;
  std::optional<fs::path> augmented;
};

BuildResult CmdBuildDataset(const RunConfig& cfg, const BuildInputs& inputs = {});

EvalReport CmdEvaluate(const RunConfig& cfg, const fs::path& tasks_dir,
                       const fs::path& candidates_file);

// 2 for toolchain and environment failures, 1 for everything else.
int ExitCodeFor(const Error& e);

}  // namespace testaug

#endif  // TESTAUG_PIPELINE_H_
