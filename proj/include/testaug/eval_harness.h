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

// Scoring generated tests: prompt assembly, bracket repair, per-assertion
// compile/pass counts, whole-function compile rate and branch coverage.

#ifndef TESTAUG_EVAL_HARNESS_H_
#define TESTAUG_EVAL_HARNESS_H_

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "testaug/project_model.h"
#include "testaug/test_miner.h"

namespace testaug {

inline constexpr std::size_t kDefaultAssertionLimit = 10;

struct EvalTask {
  std::string task_id;
  std::string imports;
  // name is the function under test; text is the canonical implementation.
  FocalFn focal;
  // "#[cfg(test)]" through the opening of the test function.
  std::string test_header;
  std::string oracle_focal;
  // Extra [dependencies] entries for the scratch crate: (name, version).
  std::vector<std::pair<std::string, std::string>> dependencies;
};

struct Candidate {
  std::string task_id;
  // The model's continuation of the prompt.
  std::string raw_completion;
  std::optional<std::string> processed;
};

std::string DefaultTestHeader(std::string_view focal_name);
// "        assert_eq!(NAME("
std::string AssertionStub(std::string_view focal_name);

std::string BuildPrompt(const EvalTask& task);

// Task files are *.json (one object) or *.jsonl (one per line) with
// task_id, declaration, canonical_solution and optional imports,
// entry_point, test_header and dependencies. Sorted by task_id.
std::vector<EvalTask> LoadTasks(const fs::path& dir);
EvalTask TaskFromRecord(std::string_view json_text);

// {task_id, completion} per line.
std::vector<Candidate> ParseCandidates(std::string_view text);
std::vector<Candidate> LoadCandidates(const fs::path& path);

// The test text a completion stands for: header and stub followed by the
// completion, unless the completion already starts with the header.
std::string CandidateTestText(const EvalTask& task, std::string_view completion);

// Balanced input is returned unchanged. Otherwise an unterminated last line
// is dropped and the missing '}' appended, one per line. Throws
// Error(kUnrepairable) when closers outnumber openers.
std::string RepairBrackets(std::string_view text);
Candidate Postprocess(Candidate c, const EvalTask& task);

// First k assertion statements, each ending in ';'.
std::vector<std::string> ExtractAssertions(std::string_view test_text,
                                           std::size_t k = kDefaultAssertionLimit);

struct AssertionScore {
  std::size_t compiled = 0;
  std::size_t passed = 0;
  std::size_t total = 0;

  bool operator==(const AssertionScore&) const = default;
};

struct FunctionScore {
  bool compiles = false;
  std::optional<double> branch_cov;
};

// Per-source-file line hits and branch sides.
struct FileCoverage {
  std::map<std::size_t, std::uint64_t> lines;
  std::vector<std::pair<std::size_t, std::uint64_t>> branches;  // (line, hits)
};
using CoverageReport = std::map<std::string, FileCoverage>;

// LCOV tracefile (SF/DA/BRDA records) or llvm-cov JSON export; the format
// is detected from the first non-blank character. Throws
// Error(kCoverageParseError).
CoverageReport ParseCoverageReport(std::string_view text);

// Taken branch sides over all sides whose line is in [begin, end] of the
// file whose path equals or ends with `file`. A span without branches
// scores 1 when any of its lines ran and 0 otherwise.
double BranchCoverage(const CoverageReport& report, std::string_view file,
                      std::size_t begin, std::size_t end);

struct LlvmTools {
  fs::path profdata;
  fs::path cov;
};

// Looks only in `dir` when given; otherwise in $TESTAUG_LLVM_TOOLS, the
// active Rust toolchain's llvm-tools, then PATH.
// Throws Error(kCoverageToolMissing).
LlvmTools FindLlvmTools(const std::optional<fs::path>& dir = std::nullopt);

struct EvalOptions {
  fs::path work_dir;  // scratch root; a temp dir when empty
  std::optional<fs::path> target_dir;
  std::size_t k = kDefaultAssertionLimit;
  std::chrono::seconds run_timeout{10};
  std::chrono::seconds build_timeout{300};
  std::size_t jobs = 1;
  std::optional<fs::path> llvm_tools_dir;
};

// Throws Error(kHarnessBuildFailed) when the task alone does not compile.
AssertionScore ScoreAssertions(const Candidate& c, const EvalTask& task,
                               const EvalOptions& opts = {});
FunctionScore ScoreFunction(const Candidate& c, const EvalTask& task,
                            const EvalOptions& opts = {});

struct TaskRow {
  std::string task_id;
  AssertionScore assertions;
  FunctionScore function;
  std::vector<std::string> notes;
};

struct EvalReport {
  double assertion_cr = 0;
  double assertion_acc = 0;
  double function_cr = 0;
  double mean_branch_cov = 0;
  std::vector<TaskRow> per_task;
};

struct BaselineRow {
  std::string_view name;
  // Percentages.
  double assertion_cr, assertion_acc, function_cr, branch_cov;
};

inline constexpr BaselineRow kGpt4Baseline{"GPT-4", 95.53, 75.04, 93.90, 47.94};

EvalReport Aggregate(std::vector<TaskRow> rows);

// Postprocesses and scores every candidate in a pool of opts.jobs workers.
// Throws Error(kInvalidArgument) for a candidate naming an unknown task.
EvalReport Evaluate(const std::vector<EvalTask>& tasks,
                    const std::vector<Candidate>& candidates,
                    const EvalOptions& opts = {});

std::string ReportJson(const EvalReport& report);
std::string ReportTable(const EvalReport& report);

}  // namespace testaug

#endif  // TESTAUG_EVAL_HARNESS_H_
