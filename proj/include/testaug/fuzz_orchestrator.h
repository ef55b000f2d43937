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

// Fuzz targets: parsing the fuzz_target! closure, instrumenting it with an
// input reporter, running the external fuzzer and harvesting what the
// reporter recorded.
//
// The reporter appends one line per executed input to the file named by
// TESTAUG_SINK: the input's bytes as lowercase two-digit hex separated by
// single spaces ("03 2c 0c"); an empty input is an empty line.

#ifndef TESTAUG_FUZZ_ORCHESTRATOR_H_
#define TESTAUG_FUZZ_ORCHESTRATOR_H_

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "testaug/error.h"
#include "testaug/project_model.h"

namespace testaug {

inline constexpr std::string_view kSinkEnvVar = "TESTAUG_SINK";
inline constexpr std::string_view kSinkBelowEnvVar = "TESTAUG_SINK_BELOW";
inline constexpr std::string_view kReporterFn = "__testaug_report";

enum class ParamKind { kByteSlice, kText, kUnsupported };

struct ParamType {
  ParamKind kind = ParamKind::kByteSlice;
  // Declared type with whitespace removed; empty when the closure omits it.
  std::string descriptor;

  bool supported() const { return kind != ParamKind::kUnsupported; }
  bool operator==(const ParamType&) const = default;
};

std::string ParamTypeName(const ParamType& type);

struct FuzzTargetUnit {
  std::string id;
  fs::path file;
  std::string param_name;
  ParamType param_type;
  std::vector<std::string> body;
  // Top-level items other than the fuzz_target! invocation, verbatim.
  std::vector<std::string> preamble;

  // Original file text and where the closure body sits in it.
  std::string source;
  bool block_body = true;
  std::size_t body_begin = 0;  // offset of `{`, or of the expression
  std::size_t body_end = 0;    // one past `}` or the expression
};

// Throws Error(kParseError) or Error(kMultipleTargets).
FuzzTargetUnit ParseFuzzTargetSource(std::string source, const fs::path& file);
FuzzTargetUnit ParseFuzzTarget(const fs::path& file);

// The target file with a reporter call as the first closure statement and
// the reporter function appended. Throws Error(kUnsupportedParam) or
// Error(kAlreadyInstrumented).
std::string InstrumentReporter(const FuzzTargetUnit& t);

struct SeedInput {
  std::vector<std::uint8_t> bytes;
  std::string target_id;

  std::size_t length() const { return bytes.size(); }
  bool operator==(const SeedInput&) const = default;
};

std::string EncodeSinkLine(std::span<const std::uint8_t> bytes);
// Strict inverse of EncodeSinkLine; nullopt for anything it would not emit.
std::optional<std::vector<std::uint8_t>> DecodeSinkLine(std::string_view line);

struct SinkContents {
  std::vector<SeedInput> inputs;
  std::size_t malformed_lines = 0;
  bool partial_tail = false;
};

// A trailing line without its newline was cut off by the kill and is dropped.
SinkContents ParseSink(std::string_view text, const std::string& target_id);
// Throws Error(kSinkUnreadable).
SinkContents ReadSink(const fs::path& path, const std::string& target_id);

struct FuzzConfig {
  std::chrono::seconds timeout{60};
  int jobs = 1;
  // Scratch space for the instrumented copy and sink files.
  fs::path work_dir;
  FuzzToolchain toolchain;
  // Extra time past the fuzzer's own deadline before it is killed.
  std::chrono::seconds kill_slack{120};
  // When set, the reporter only records inputs shorter than this.
  std::optional<std::size_t> report_below_len;
};

struct TargetRun {
  std::string target_id;
  std::vector<SeedInput> inputs;
  std::optional<Error> error;  // set when the run failed
  std::vector<std::string> diagnostics;
};

// Owns an instrumented copy of one workspace.
class FuzzSession {
 public:
  // Parses every declared target; unsupported or unparsable ones are
  // recorded in diagnostics() and left uninstrumented.
  FuzzSession(const Workspace& ws, FuzzConfig cfg);

  const std::vector<FuzzTargetUnit>& targets() const { return targets_; }
  const std::vector<std::string>& diagnostics() const { return diagnostics_; }
  // Ids of the targets that carry a reporter, in target order.
  const std::vector<std::string>& instrumented() const { return instrumented_; }

  // Copies the workspace, instruments the supported targets and builds once.
  // Throws Error(kFuzzBuildFailed) or Error(kToolchainMissing).
  void Prepare();

  // Throws Error(kFuzzRunFailed) or Error(kSinkUnreadable). A zero timeout
  // returns nothing without launching the fuzzer.
  std::vector<SeedInput> Fuzz(const std::string& target_id,
                              std::chrono::seconds timeout);

  // Runs every instrumented target with cfg.timeout in a pool of cfg.jobs
  // workers. Failures are captured per target.
  std::vector<TargetRun> FuzzAll();

  const fs::path& copy_root() const { return copy_root_; }

 private:
  TargetRun RunOne(const std::string& target_id,
                   std::chrono::seconds timeout) const;
  fs::path target_dir() const;

  const Workspace& ws_;
  FuzzConfig cfg_;
  std::vector<FuzzTargetUnit> targets_;
  std::vector<std::string> instrumented_;
  std::vector<std::string> diagnostics_;
  fs::path copy_root_;
  bool prepared_ = false;
};

}  // namespace testaug

#endif  // TESTAUG_FUZZ_ORCHESTRATOR_H_
