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

#include "testaug/fuzz_orchestrator.h"

#include <unistd.h>

#include <algorithm>

#include "testaug/process.h"
#include "testaug/rust_syntax.h"

namespace testaug {
namespace {

using rust::TokenKind;
using rust::TokenStream;

// Appended to instrumented targets. Opens the sink once, in append mode, and
// writes each line with a single call so concurrent workers never interleave
// partial lines. TESTAUG_SINK_BELOW, when set, skips inputs of that length
// or more.
constexpr std::string_view kReporterSource = R"(
#[doc(hidden)]
#[allow(dead_code)]
fn __testaug_report(input: &[u8]) {
    use std::io::Write;
    static SINK: std::sync::OnceLock<Option<(std::sync::Mutex<std::fs::File>, usize)>> =
        std::sync::OnceLock::new();
    let sink = SINK.get_or_init(|| {
        let path = std::env::var_os("TESTAUG_SINK")?;
        let limit = std::env::var("TESTAUG_SINK_BELOW")
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
            .unwrap_or(usize::MAX);
        let file = std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .ok()?;
        Some((std::sync::Mutex::new(file), limit))
    });
    if let Some((file, limit)) = sink {
        if input.len() >= *limit {
            return;
        }
        const HEX: &[u8; 16] = b"0123456789abcdef";
        let mut line = Vec::with_capacity(input.len() * 3 + 1);
        for (i, b) in input.iter().enumerate() {
            if i > 0 {
                line.push(b' ');
            }
            line.push(HEX[(b >> 4) as usize]);
            line.push(HEX[(b & 0xf) as usize]);
        }
        line.push(b'\n');
        let mut f = file.lock().unwrap_or_else(|e| e.into_inner());
        let _ = f.write_all(&line);
    }
}
)";

std::string StripSpaces(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c != ' ' && c != '\t' && c != '\n' && c != '\r') out.push_back(c);
  }
  return out;
}

// Next token index in [i, end) that equals `text` outside nested groups.
std::size_t FindTopLevel(const TokenStream& ts, std::size_t i, std::size_t end,
                         std::string_view text) {
  while (i < end) {
    if (ts.Is(i, text)) return i;
    if (ts[i].kind == TokenKind::kOpen) {
      i = ts[i].match + 1;
    } else {
      ++i;
    }
  }
  return rust::kNoToken;
}

[[noreturn]] void Fail(const fs::path& file, const std::string& what) {
  throw Error(ErrorCode::kParseError, file.string() + ": " + what);
}

int HexValue(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

}  // namespace

std::string ParamTypeName(const ParamType& type) {
  switch (type.kind) {
    case ParamKind::kByteSlice:
      return "byte-slice";
    case ParamKind::kText:
      return "text";
    case ParamKind::kUnsupported:
      return "unsupported(" + type.descriptor + ")";
  }
  return {};
}

FuzzTargetUnit ParseFuzzTargetSource(std::string source, const fs::path& file) {
  std::string err;
  auto parsed = TokenStream::TryParse(std::move(source), &err);
  if (!parsed) Fail(file, err);
  const TokenStream& ts = *parsed;

  std::vector<std::size_t> sites;
  for (std::size_t i = 0; i + 2 < ts.size(); ++i) {
    if (ts.IsIdent(i) && ts.Text(i) == "fuzz_target" && ts.Is(i + 1, "!") &&
        ts[i + 2].kind == TokenKind::kOpen) {
      sites.push_back(i);
    }
  }
  if (sites.empty()) Fail(file, "no fuzz_target! invocation");
  if (sites.size() > 1) {
    throw Error(ErrorCode::kMultipleTargets,
                file.string() + ": " + std::to_string(sites.size()) +
                    " fuzz_target! invocations");
  }
  const std::size_t site = sites[0];
  const std::size_t open = site + 2;
  const std::size_t close = ts[open].match;

  std::size_t j = open + 1;
  if (ts.Is(j, "init") && ts.Is(j + 1, ":")) {
    const std::size_t comma = FindTopLevel(ts, j + 2, close, ",");
    if (comma == rust::kNoToken) Fail(file, "init expression without closure");
    j = comma + 1;
  }
  if (ts.Is(j, "move")) ++j;
  if (!ts.Is(j, "|")) Fail(file, "expected a closure argument");
  const std::size_t bar = FindTopLevel(ts, j + 1, close, "|");
  if (bar == rust::kNoToken) Fail(file, "unterminated closure parameters");

  // Exactly one parameter, optionally followed by a trailing comma.
  std::size_t p_end = bar;
  if (p_end > j + 1 && ts.Is(p_end - 1, ",")) --p_end;
  if (p_end == j + 1) Fail(file, "closure takes no parameter");
  if (FindTopLevel(ts, j + 1, p_end, ",") != rust::kNoToken) {
    Fail(file, "closure takes more than one parameter");
  }
  const std::size_t colon = FindTopLevel(ts, j + 1, p_end, ":");
  std::size_t name_first = j + 1;
  const std::size_t name_last = (colon == rust::kNoToken ? p_end : colon) - 1;
  if (name_first > name_last) Fail(file, "missing parameter pattern");
  if (ts.Is(name_first, "mut") && name_first < name_last) ++name_first;

  FuzzTargetUnit unit;
  unit.file = file;
  unit.id = file.stem().string();
  unit.param_name = std::string(ts.Slice(name_first, name_last));
  if (colon != rust::kNoToken) {
    if (colon + 1 >= p_end) Fail(file, "missing parameter type");
    unit.param_type.descriptor = StripSpaces(ts.Slice(colon + 1, p_end - 1));
    if (unit.param_type.descriptor == "&[u8]") {
      unit.param_type.kind = ParamKind::kByteSlice;
    } else if (unit.param_type.descriptor == "&str") {
      unit.param_type.kind = ParamKind::kText;
    } else {
      unit.param_type.kind = ParamKind::kUnsupported;
    }
  }

  std::size_t b = bar + 1;
  if (ts.Is(b, "->")) {
    while (b < close && !ts.IsOpen(b, '{')) ++b;
  }
  if (b >= close) Fail(file, "empty closure body");
  if (ts.IsOpen(b, '{')) {
    const std::size_t b_close = ts[b].match;
    for (rust::Statement& s : rust::SplitStatements(ts, b, b_close)) {
      unit.body.push_back(std::move(s.text));
    }
    unit.block_body = true;
    unit.body_begin = ts[b].offset;
    unit.body_end = ts[b_close].end();
  } else {
    std::size_t last = close - 1;
    if (ts.Is(last, ",") && last > b) --last;
    unit.body.emplace_back(ts.Slice(b, last));
    unit.block_body = false;
    unit.body_begin = ts[b].offset;
    unit.body_end = ts[last].end();
  }
  if (unit.body.empty()) Fail(file, "empty closure body");

  for (rust::Statement& item : rust::SplitItems(ts)) {
    if (item.first_token <= site && site <= item.last_token) continue;
    unit.preamble.push_back(std::move(item.text));
  }
  unit.source = ts.source();
  return unit;
}

FuzzTargetUnit ParseFuzzTarget(const fs::path& file) {
  return ParseFuzzTargetSource(ReadFileText(file), file);
}

std::string InstrumentReporter(const FuzzTargetUnit& t) {
  if (!t.param_type.supported()) {
    throw Error(ErrorCode::kUnsupportedParam,
                t.id + ": parameter type " + t.param_type.descriptor);
  }
  const std::string marker = std::string(kReporterFn) + "(";
  if (t.body.front().find(marker) != std::string::npos ||
      t.source.find("fn " + std::string(kReporterFn)) != std::string::npos) {
    throw Error(ErrorCode::kAlreadyInstrumented, t.id);
  }
  const std::string arg = t.param_type.kind == ParamKind::kText
                              ? t.param_name + ".as_bytes()"
                              : t.param_name;
  const std::string call = marker + arg + ");";

  std::string out;
  out.reserve(t.source.size() + kReporterSource.size() + 64);
  if (t.block_body) {
    out.append(t.source, 0, t.body_begin + 1);
    out.append("\n    ").append(call);
    out.append(t.source, t.body_begin + 1, std::string::npos);
  } else {
    out.append(t.source, 0, t.body_begin);
    out.append("{\n    ").append(call).append("\n    ");
    out.append(t.source, t.body_begin, t.body_end - t.body_begin);
    out.append("\n}");
    out.append(t.source, t.body_end, std::string::npos);
  }
  if (!out.empty() && out.back() != '\n') out.push_back('\n');
  out.append(kReporterSource);
  return out;
}

std::string EncodeSinkLine(std::span<const std::uint8_t> bytes) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 3);
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out.push_back(kHex[bytes[i] >> 4]);
    out.push_back(kHex[bytes[i] & 0xf]);
  }
  return out;
}

std::optional<std::vector<std::uint8_t>> DecodeSinkLine(std::string_view line) {
  std::vector<std::uint8_t> out;
  if (line.empty()) return out;
  if ((line.size() + 1) % 3 != 0) return std::nullopt;
  out.reserve((line.size() + 1) / 3);
  for (std::size_t i = 0; i < line.size(); i += 3) {
    const int hi = HexValue(line[i]);
    const int lo = HexValue(line[i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    if (i + 2 < line.size() && line[i + 2] != ' ') return std::nullopt;
    out.push_back(static_cast<std::uint8_t>(hi * 16 + lo));
  }
  return out;
}

SinkContents ParseSink(std::string_view text, const std::string& target_id) {
  SinkContents out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      out.partial_tail = true;
      break;
    }
    auto bytes = DecodeSinkLine(text.substr(pos, nl - pos));
    if (bytes) {
      out.inputs.push_back({std::move(*bytes), target_id});
    } else {
      ++out.malformed_lines;
    }
    pos = nl + 1;
  }
  return out;
}

SinkContents ReadSink(const fs::path& path, const std::string& target_id) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) {
    throw Error(ErrorCode::kSinkUnreadable, path.string() + " missing");
  }
  std::string text;
  try {
    text = ReadFileText(path);
  } catch (const Error& e) {
    throw Error(ErrorCode::kSinkUnreadable, e.what());
  }
  return ParseSink(text, target_id);
}

FuzzSession::FuzzSession(const Workspace& ws, FuzzConfig cfg)
    : ws_(ws), cfg_(std::move(cfg)) {
  if (cfg_.work_dir.empty()) {
    cfg_.work_dir = fs::temp_directory_path() /
                    ("testaug-fuzz-" + std::to_string(::getpid()));
  }
  cfg_.work_dir = fs::absolute(cfg_.work_dir);
  copy_root_ = cfg_.work_dir / "ws" / ws_.package_name;
  for (const fs::path& file : ws_.fuzz_target_files) {
    try {
      FuzzTargetUnit unit = ParseFuzzTarget(file);
      if (!unit.param_type.supported()) {
        diagnostics_.push_back("skipped " + unit.id + ": parameter type " +
                               ParamTypeName(unit.param_type));
      }
      targets_.push_back(std::move(unit));
    } catch (const Error& e) {
      diagnostics_.push_back(std::string("skipped target: ") + e.what());
    }
  }
}

fs::path FuzzSession::target_dir() const {
  return cfg_.toolchain.target_dir.value_or(cfg_.work_dir / "cargo-target");
}

void FuzzSession::Prepare() {
  if (prepared_) return;
  RequireFuzzToolchain(cfg_.toolchain);
  CopyWorkspaceTree(ws_.root_path, copy_root_);
  instrumented_.clear();
  for (const FuzzTargetUnit& unit : targets_) {
    if (!unit.param_type.supported()) continue;
    const fs::path dest = copy_root_ / unit.file.lexically_relative(ws_.root_path);
    try {
      WriteFileAtomic(dest, InstrumentReporter(unit));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kAlreadyInstrumented) throw;
      diagnostics_.push_back(unit.id + " already carries a reporter");
    }
    instrumented_.push_back(unit.id);
  }

  ProcessSpec spec;
  spec.argv = cfg_.toolchain.command;
  spec.argv.insert(spec.argv.end(),
                   {"build", "--sanitizer", cfg_.toolchain.sanitizer,
                    "--target-dir", target_dir().string()});
  spec.cwd = copy_root_;
  spec.timeout = cfg_.toolchain.build_timeout;
  const ProcessResult r = RunProcess(spec);
  if (!r.ok()) {
    const std::string& log = r.err;
    throw Error(ErrorCode::kFuzzBuildFailed,
                ws_.package_name + ": " +
                    log.substr(log.size() > 4000 ? log.size() - 4000 : 0));
  }
  prepared_ = true;
}

TargetRun FuzzSession::RunOne(const std::string& target_id,
                              std::chrono::seconds timeout) const {
  TargetRun run;
  run.target_id = target_id;
  if (timeout.count() <= 0) return run;

  const fs::path sink = cfg_.work_dir / "sinks" / (target_id + ".hex");
  WriteFileAtomic(sink, "");

  ProcessSpec spec;
  spec.argv = cfg_.toolchain.command;
  spec.argv.insert(spec.argv.end(),
                   {"run", "--sanitizer", cfg_.toolchain.sanitizer,
                    "--target-dir", target_dir().string(), target_id, "--",
                    "-max_total_time=" + std::to_string(timeout.count())});
  spec.cwd = copy_root_;
  spec.env.emplace_back(std::string(kSinkEnvVar), sink.string());
  if (cfg_.report_below_len) {
    spec.env.emplace_back(std::string(kSinkBelowEnvVar),
                          std::to_string(*cfg_.report_below_len));
  }
  spec.timeout = timeout + cfg_.kill_slack;
  const ProcessResult r = RunProcess(spec);
  if (!r.ok() && !r.timed_out) {
    const std::string status =
        r.signaled ? "signal " + std::to_string(r.term_signal)
                   : "exit " + std::to_string(r.exit_code);
    const std::string& log = r.err;
    run.error = Error(ErrorCode::kFuzzRunFailed,
                      target_id + " (" + status + "): " +
                          log.substr(log.size() > 2000 ? log.size() - 2000 : 0));
    return run;
  }
  if (r.timed_out) {
    run.diagnostics.push_back(target_id + ": killed after deadline");
  }
  try {
    SinkContents contents = ReadSink(sink, target_id);
    run.inputs = std::move(contents.inputs);
    if (contents.malformed_lines > 0) {
      run.diagnostics.push_back(target_id + ": " +
                                std::to_string(contents.malformed_lines) +
                                " malformed sink lines");
    }
    if (contents.partial_tail) {
      run.diagnostics.push_back(target_id + ": dropped partial sink line");
    }
  } catch (const Error& e) {
    run.error = e;
  }
  return run;
}

std::vector<SeedInput> FuzzSession::Fuzz(const std::string& target_id,
                                         std::chrono::seconds timeout) {
  if (timeout.count() <= 0) return {};
  Prepare();
  if (std::find(instrumented_.begin(), instrumented_.end(), target_id) ==
      instrumented_.end()) {
    throw Error(ErrorCode::kInvalidArgument,
                "no instrumented target " + target_id);
  }
  TargetRun run = RunOne(target_id, timeout);
  if (run.error) throw *run.error;
  diagnostics_.insert(diagnostics_.end(), run.diagnostics.begin(),
                      run.diagnostics.end());
  return std::move(run.inputs);
}

std::vector<TargetRun> FuzzSession::FuzzAll() {
  Prepare();
  const auto n = static_cast<std::ptrdiff_t>(instrumented_.size());
  std::vector<TargetRun> runs(instrumented_.size());
  const int jobs = std::max(1, cfg_.jobs);
#pragma omp parallel for schedule(dynamic, 1) num_threads(jobs)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      runs[i] = RunOne(instrumented_[i], cfg_.timeout);
    } catch (const Error& e) {
      runs[i].target_id = instrumented_[i];
      runs[i].error = e;
    } catch (const std::exception& e) {
      runs[i].target_id = instrumented_[i];
      runs[i].error = Error(ErrorCode::kFuzzRunFailed, e.what());
    }
  }
  return runs;
}

}  // namespace testaug
