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

#include "testaug/eval_harness.h"

#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <random>

#include "json.hpp"
#include "testaug/error.h"
#include "testaug/process.h"
#include "testaug/rust_syntax.h"
#include "testaug/test_synthesizer.h"

namespace testaug {
namespace {

using json = nlohmann::ordered_json;

constexpr std::string_view kCoverageFlags =
    "-Cinstrument-coverage -Zcoverage-options=branch";
constexpr std::string_view kCheckModule = "testaug_checks";

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::string EnsureNewline(std::string s) {
  if (!s.empty() && s.back() != '\n') s.push_back('\n');
  return s;
}

std::size_t CountNewlines(std::string_view s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

std::vector<std::string_view> Lines(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t nl = s.find('\n', pos);
    if (nl == std::string_view::npos) nl = s.size();
    out.push_back(s.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return out;
}

// Leading `use` / `extern crate` lines (and blank lines between them).
std::pair<std::string, std::string> SplitImports(std::string_view decl) {
  std::vector<std::string_view> lines = Lines(decl);
  std::size_t i = 0;
  bool in_use = false;
  for (; i < lines.size(); ++i) {
    const std::string_view t = Trim(lines[i]);
    if (in_use) {
      in_use = t.find(';') == std::string_view::npos;
      continue;
    }
    if (t.empty()) continue;
    if (t.starts_with("use ") || t.starts_with("pub use ") ||
        t.starts_with("extern crate ")) {
      in_use = t.find(';') == std::string_view::npos;
      continue;
    }
    break;
  }
  std::string imports;
  for (std::size_t j = 0; j < i; ++j) {
    if (Trim(lines[j]).empty() && imports.empty()) continue;
    imports += lines[j];
    imports += '\n';
  }
  while (imports.size() >= 2 && imports.ends_with("\n\n")) imports.pop_back();
  std::string rest;
  for (std::size_t j = i; j < lines.size(); ++j) {
    rest += lines[j];
    if (j + 1 < lines.size()) rest += '\n';
  }
  return {imports, rest};
}

std::optional<std::string> FirstFnName(std::string_view text) {
  auto ts = rust::TokenStream::TryParse(std::string(text) + "}");
  if (!ts) ts = rust::TokenStream::TryParse(std::string(text));
  if (!ts) return std::nullopt;
  for (std::size_t i = 0; i + 1 < ts->size(); ++i) {
    if (ts->Is(i, "fn") && ts->IsIdent(i + 1)) return std::string(ts->Text(i + 1));
  }
  return std::nullopt;
}

std::string RequireField(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw Error(ErrorCode::kParseError,
                std::string("task record lacks string field ") + key);
  }
  return it->get<std::string>();
}

std::string TempRoot() {
  std::random_device rd;
  return (fs::temp_directory_path() /
          ("testaug-eval-" + std::to_string(::getpid()) + "-" +
           std::to_string(rd())))
      .string();
}

// Unique per scratch directory: cargo names path-package artifacts by a hash
// relative to the workspace root, so equal names would collide in a shared
// target directory.
std::string PackageName(const EvalTask& task, const fs::path& crate) {
  std::uint32_t h = 2166136261u;  // FNV-1a
  for (unsigned char c : crate.string()) h = (h ^ c) * 16777619u;
  char suffix[16];
  std::snprintf(suffix, sizeof(suffix), "_%08x", h);
  std::string name = "testaug_eval_" + SanitizeIdent(task.task_id) + suffix;
  for (char& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return name;
}

// The task's imports and oracle focal; `focal_begin`/`focal_end` receive the
// 1-based line span of the focal in the returned text.
std::string BaseSource(const EvalTask& task, std::size_t* focal_begin = nullptr,
                       std::size_t* focal_end = nullptr) {
  std::string out = "#![allow(warnings)]\n";
  out += EnsureNewline(task.imports);
  const std::size_t begin = CountNewlines(out) + 1;
  const std::string focal = EnsureNewline(task.oracle_focal);
  out += focal;
  if (focal_begin) *focal_begin = begin;
  if (focal_end) *focal_end = begin + CountNewlines(Trim(focal));
  return out;
}

std::string CheckModule(const std::vector<std::string>& assertions,
                        const std::vector<std::size_t>& ids) {
  std::string out = "\n#[cfg(test)]\nmod " + std::string(kCheckModule) +
                    " {\n    use super::*;\n";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out += "    #[test]\n    fn a" + std::to_string(ids[i]) + "() {\n        " +
           assertions[i] + "\n    }\n";
  }
  out += "}\n";
  return out;
}

struct Build {
  bool ok = false;
  fs::path executable;
  std::string log;
};

class Scratch {
 public:
  Scratch(const EvalTask& task, const EvalOptions& opts, fs::path root)
      : task_(task), opts_(opts), root_(std::move(root)) {}

  Build Compile(const std::string& dir, const std::string& lib_rs,
                bool coverage) const {
    const fs::path crate = root_ / dir;
    std::string manifest = "[package]\nname = \"" + PackageName(task_, crate) +
                           "\"\nversion = \"0.1.0\"\nedition = \"2021\"\n\n"
                           "[dependencies]\n";
    for (const auto& [name, version] : task_.dependencies) {
      manifest += name + " = \"" + version + "\"\n";
    }
    manifest += "\n[workspace]\n";
    WriteFileAtomic(crate / "Cargo.toml", manifest);
    WriteFileAtomic(crate / "src" / "lib.rs", lib_rs);

    ProcessSpec spec;
    spec.argv = {"cargo", "test", "--no-run", "--lib", "--message-format=json",
                 "--target-dir", TargetDir(coverage).string()};
    spec.cwd = crate;
    spec.timeout = opts_.build_timeout;
    spec.env.emplace_back("RUSTFLAGS", coverage ? std::string(kCoverageFlags) : "");
    if (coverage) spec.env.emplace_back("RUSTC_BOOTSTRAP", "1");
    const ProcessResult r = RunProcess(spec);
    Build b;
    b.log = r.err;
    if (!r.ok()) return b;
    for (std::string_view line : Lines(r.out)) {
      if (line.empty()) continue;
      const json msg = json::parse(line, nullptr, false);
      if (!msg.is_object() || msg.value("reason", "") != "compiler-artifact") continue;
      auto exe = msg.find("executable");
      if (exe != msg.end() && exe->is_string() &&
          msg.value("/profile/test"_json_pointer, false)) {
        b.executable = exe->get<std::string>();
      }
    }
    b.ok = !b.executable.empty();
    if (!b.ok) b.log += "\nno test executable reported by cargo";
    return b;
  }

  // Runs one test of the check module (or all tests when `name` is empty).
  ProcessResult Run(const fs::path& exe, const std::string& name,
                    const std::vector<std::pair<std::string, std::string>>& env =
                        {}) const {
    ProcessSpec spec;
    spec.argv = {exe.string(), "--test-threads=1"};
    if (!name.empty()) {
      spec.argv.push_back("--exact");
      spec.argv.push_back(std::string(kCheckModule) + "::" + name);
    }
    spec.cwd = root_;
    spec.timeout = opts_.run_timeout;
    spec.kill_grace = std::chrono::milliseconds(500);
    spec.env = env;
    return RunProcess(spec);
  }

  const fs::path& root() const { return root_; }

 private:
  fs::path TargetDir(bool coverage) const {
    const fs::path base = opts_.target_dir ? *opts_.target_dir : root_ / "target";
    return base / (coverage ? "cov" : "plain");
  }

  const EvalTask& task_;
  const EvalOptions& opts_;
  fs::path root_;
};

bool RanOnePassing(const ProcessResult& r) {
  return r.ok() && r.out.find(" 1 passed") != std::string::npos;
}

const std::string& TestText(const Candidate& c) {
  return c.processed ? *c.processed : c.raw_completion;
}

// Owns a scratch root when the caller did not supply one.
class WorkDir {
 public:
  explicit WorkDir(const fs::path& requested)
      : path_(requested.empty() ? fs::path(TempRoot()) : requested),
        owned_(requested.empty()) {
    fs::create_directories(path_);
  }
  ~WorkDir() {
    if (owned_) {
      std::error_code ec;
      fs::remove_all(path_, ec);
    }
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
  bool owned_;
};

std::uint64_t ParseCount(std::string_view s) {
  if (s == "-") return 0;
  std::uint64_t v = 0;
  if (s.empty()) throw Error(ErrorCode::kCoverageParseError, "empty count");
  for (char c : s) {
    if (c < '0' || c > '9') {
      throw Error(ErrorCode::kCoverageParseError,
                  "bad count '" + std::string(s) + "'");
    }
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return v;
}

std::vector<std::string_view> SplitComma(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t c = s.find(',', pos);
    out.push_back(s.substr(pos, c == std::string_view::npos ? s.npos : c - pos));
    if (c == std::string_view::npos) break;
    pos = c + 1;
  }
  return out;
}

CoverageReport ParseLcov(std::string_view text) {
  CoverageReport report;
  FileCoverage* file = nullptr;
  std::size_t line_no = 0;
  for (std::string_view raw : Lines(text)) {
    ++line_no;
    const std::string_view line = Trim(raw);
    if (line.empty()) continue;
    const auto fail = [&](const std::string& why) {
      return Error(ErrorCode::kCoverageParseError,
                   "lcov line " + std::to_string(line_no) + ": " + why);
    };
    if (line.starts_with("SF:")) {
      file = &report[std::string(line.substr(3))];
      continue;
    }
    if (line == "end_of_record") {
      file = nullptr;
      continue;
    }
    const bool da = line.starts_with("DA:");
    const bool brda = line.starts_with("BRDA:");
    if (!da && !brda) continue;
    if (file == nullptr) throw fail("record outside SF section");
    const auto fields = SplitComma(line.substr(da ? 3 : 5));
    if (da ? fields.size() < 2 : fields.size() != 4) {
      throw fail(da ? "DA needs line,count" : "BRDA needs 4 fields");
    }
    try {
      if (da) {
        const std::size_t l = ParseCount(fields[0]);
        file->lines[l] = std::max(file->lines[l], ParseCount(fields[1]));
      } else {
        file->branches.emplace_back(ParseCount(fields[0]), ParseCount(fields[3]));
      }
    } catch (const Error& e) {
      throw fail(e.what());
    }
  }
  return report;
}

CoverageReport ParseLlvmCovJson(std::string_view text) {
  CoverageReport report;
  try {
    const json doc = json::parse(text);
    for (const json& export_ : doc.at("data")) {
      for (const json& f : export_.at("files")) {
        FileCoverage& file = report[f.at("filename").get<std::string>()];
        if (auto b = f.find("branches"); b != f.end()) {
          for (const json& br : *b) {
            const std::size_t line = br.at(0).get<std::size_t>();
            file.branches.emplace_back(line, br.at(4).get<std::uint64_t>());
            file.branches.emplace_back(line, br.at(5).get<std::uint64_t>());
          }
        }
        if (auto s = f.find("segments"); s != f.end()) {
          for (const json& seg : *s) {
            if (!seg.at(3).get<bool>()) continue;
            const std::size_t line = seg.at(0).get<std::size_t>();
            file.lines[line] = std::max(file.lines[line], seg.at(2).get<std::uint64_t>());
          }
        }
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kCoverageParseError,
                std::string("llvm-cov json: ") + e.what());
  }
  return report;
}

std::optional<fs::path> ToolIn(const fs::path& dir, const char* name) {
  const fs::path p = dir / name;
  if (::access(p.c_str(), X_OK) == 0) return p;
  return std::nullopt;
}

std::optional<fs::path> RustToolchainBin() {
  try {
    ProcessSpec sysroot;
    sysroot.argv = {"rustc", "--print", "sysroot"};
    sysroot.timeout = std::chrono::seconds(30);
    const ProcessResult s = RunProcess(sysroot);
    ProcessSpec vv;
    vv.argv = {"rustc", "-vV"};
    vv.timeout = std::chrono::seconds(30);
    const ProcessResult v = RunProcess(vv);
    if (!s.ok() || !v.ok()) return std::nullopt;
    for (std::string_view line : Lines(v.out)) {
      if (line.starts_with("host: ")) {
        return fs::path(std::string(Trim(s.out))) / "lib" / "rustlib" /
               std::string(Trim(line.substr(6))) / "bin";
      }
    }
  } catch (const Error&) {
  }
  return std::nullopt;
}

}  // namespace

std::string DefaultTestHeader(std::string_view focal_name) {
  const std::string name(focal_name);
  return "#[cfg(test)]\nmod tests {\n    use super::*;\n    #[test]\n    fn test_" +
         name + "() {\n";
}

std::string AssertionStub(std::string_view focal_name) {
  return "        assert_eq!(" + std::string(focal_name) + "(";
}

std::string BuildPrompt(const EvalTask& task) {
  std::string out = EnsureNewline(task.imports);
  out += EnsureNewline(task.focal.text);
  out += "// Check the correctness of `" + task.focal.name + "`\n";
  out += task.test_header;
  out += AssertionStub(task.focal.name);
  return out;
}

EvalTask TaskFromRecord(std::string_view json_text) {
  const json obj = json::parse(json_text, nullptr, false);
  if (!obj.is_object()) {
    throw Error(ErrorCode::kParseError, "task record is not a JSON object");
  }
  EvalTask task;
  task.task_id = RequireField(obj, "task_id");
  auto [imports, decl] = SplitImports(RequireField(obj, "declaration"));
  if (obj.contains("imports")) imports = RequireField(obj, "imports");
  std::string focal(Trim(decl + RequireField(obj, "canonical_solution")));
  std::string name;
  if (obj.contains("entry_point")) {
    name = RequireField(obj, "entry_point");
  } else if (auto n = FirstFnName(focal)) {
    name = *n;
  } else {
    throw Error(ErrorCode::kParseError, task.task_id + ": no fn in declaration");
  }
  task.imports = imports;
  task.oracle_focal = focal;
  task.focal.name = name;
  task.focal.text = focal;
  task.focal.qualified_path = {name};
  task.test_header = obj.contains("test_header") ? RequireField(obj, "test_header")
                                                 : DefaultTestHeader(name);
  if (auto deps = obj.find("dependencies"); deps != obj.end()) {
    if (!deps->is_object()) {
      throw Error(ErrorCode::kParseError, task.task_id + ": dependencies must be an object");
    }
    for (const auto& [k, v] : deps->items()) {
      if (!v.is_string()) {
        throw Error(ErrorCode::kParseError,
                    task.task_id + ": dependency " + k + " needs a version string");
      }
      task.dependencies.emplace_back(k, v.get<std::string>());
    }
  }
  return task;
}

std::vector<EvalTask> LoadTasks(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw Error(ErrorCode::kIoError, "task directory not found: " + dir.string());
  }
  std::vector<EvalTask> tasks;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const fs::path& p = entry.path();
    const auto with_file = [&](const auto& fn) {
      try {
        fn();
      } catch (const Error& e) {
        throw Error(e.code(), p.filename().string() + ": " + e.what());
      }
    };
    if (p.extension() == ".json") {
      with_file([&] { tasks.push_back(TaskFromRecord(ReadFileText(p))); });
    } else if (p.extension() == ".jsonl") {
      const std::string text = ReadFileText(p);
      for (std::string_view line : Lines(text)) {
        if (Trim(line).empty()) continue;
        with_file([&] { tasks.push_back(TaskFromRecord(line)); });
      }
    }
  }
  std::sort(tasks.begin(), tasks.end(),
            [](const EvalTask& a, const EvalTask& b) { return a.task_id < b.task_id; });
  for (std::size_t i = 1; i < tasks.size(); ++i) {
    if (tasks[i].task_id == tasks[i - 1].task_id) {
      throw Error(ErrorCode::kParseError, "duplicate task_id " + tasks[i].task_id);
    }
  }
  return tasks;
}

std::vector<Candidate> ParseCandidates(std::string_view text) {
  std::vector<Candidate> out;
  std::size_t line_no = 0;
  for (std::string_view line : Lines(text)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const json obj = json::parse(line, nullptr, false);
    if (!obj.is_object() || !obj.contains("task_id") ||
        !obj["task_id"].is_string() || !obj.contains("completion") ||
        !obj["completion"].is_string()) {
      throw Error(ErrorCode::kParseError,
                  "candidates line " + std::to_string(line_no) +
                      ": expected {task_id, completion}");
    }
    out.push_back({obj["task_id"].get<std::string>(),
                   obj["completion"].get<std::string>(), std::nullopt});
  }
  return out;
}

std::vector<Candidate> LoadCandidates(const fs::path& path) {
  return ParseCandidates(ReadFileText(path));
}

std::string CandidateTestText(const EvalTask& task, std::string_view completion) {
  std::string_view head = Trim(completion);
  if (head.starts_with("#[cfg(test)]")) return std::string(completion);
  return task.test_header + AssertionStub(task.focal.name) + std::string(completion);
}

std::string RepairBrackets(std::string_view text) {
  const auto count = [](std::string_view s, char c) {
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), c));
  };
  std::size_t open = count(text, '{');
  std::size_t close = count(text, '}');
  if (open == close) return std::string(text);
  if (close > open) {
    throw Error(ErrorCode::kUnrepairable,
                std::to_string(close - open) + " more '}' than '{'");
  }
  std::string out(text);
  // Trailing blank lines do not count as the last line.
  while (!out.empty() && std::isspace(static_cast<unsigned char>(out.back()))) {
    out.pop_back();
  }
  if (!out.empty() && out.back() != ';') {
    const std::size_t nl = out.rfind('\n');
    out.erase(nl == std::string::npos ? 0 : nl);
    open = count(out, '{');
    close = count(out, '}');
    if (close > open) {
      throw Error(ErrorCode::kUnrepairable,
                  "dropping the incomplete last line leaves excess '}'");
    }
  }
  for (std::size_t i = close; i < open; ++i) out += "\n}";
  return out;
}

Candidate Postprocess(Candidate c, const EvalTask& task) {
  c.processed = RepairBrackets(CandidateTestText(task, c.raw_completion));
  return c;
}

std::vector<std::string> ExtractAssertions(std::string_view test_text,
                                           std::size_t k) {
  std::vector<std::string> out;
  auto ts = rust::TokenStream::TryParse(std::string(test_text));
  if (!ts || ts->size() == 0) return out;
  std::size_t covered_until = 0;
  bool any = false;
  for (const rust::MacroCall& m :
       rust::FindMacroCalls(*ts, 0, ts->size() - 1, kAssertionMacros)) {
    if (out.size() >= k) break;
    if (any && m.name_token <= covered_until) continue;
    std::string stmt(ts->Slice(m.name_token, m.last_token));
    if (!ts->Is(m.last_token, ";")) stmt += ";";
    out.push_back(std::move(stmt));
    covered_until = m.last_token;
    any = true;
  }
  return out;
}

AssertionScore ScoreAssertions(const Candidate& c, const EvalTask& task,
                               const EvalOptions& opts) {
  WorkDir work(opts.work_dir);
  const Scratch scratch(task, opts, work.path());
  const std::string base = BaseSource(task);
  const Build empty = scratch.Compile("base", base, false);
  if (!empty.ok) {
    throw Error(ErrorCode::kHarnessBuildFailed,
                task.task_id + ": oracle does not compile\n" + empty.log);
  }
  const std::vector<std::string> asserts = ExtractAssertions(TestText(c), opts.k);
  AssertionScore score;
  score.total = asserts.size();
  if (asserts.empty()) return score;

  std::vector<std::size_t> all(asserts.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const Build batch = scratch.Compile("batch", base + CheckModule(asserts, all), false);
  for (std::size_t i = 0; i < asserts.size(); ++i) {
    Build single;
    const Build* b = &batch;
    if (!batch.ok) {
      single = scratch.Compile("a" + std::to_string(i),
                               base + CheckModule({asserts[i]}, {i}), false);
      b = &single;
    }
    if (!b->ok) continue;
    ++score.compiled;
    if (RanOnePassing(scratch.Run(b->executable, "a" + std::to_string(i)))) {
      ++score.passed;
    }
  }
  return score;
}

FunctionScore ScoreFunction(const Candidate& c, const EvalTask& task,
                            const EvalOptions& opts) {
  WorkDir work(opts.work_dir);
  const Scratch scratch(task, opts, work.path());
  std::size_t begin = 0, end = 0;
  const std::string source = BaseSource(task, &begin, &end) + "\n" + TestText(c) + "\n";
  const Build b = scratch.Compile("func", source, true);
  FunctionScore score;
  if (!b.ok) return score;
  score.compiles = true;

  const LlvmTools tools = FindLlvmTools(opts.llvm_tools_dir);
  const fs::path prof = work.path() / "func" / "prof";
  std::error_code ec;
  fs::remove_all(prof, ec);
  fs::create_directories(prof);
  scratch.Run(b.executable, "",
              {{"LLVM_PROFILE_FILE", (prof / "cov-%p-%m.profraw").string()}});
  std::vector<std::string> raws;
  for (const auto& e : fs::directory_iterator(prof)) {
    if (e.path().extension() == ".profraw") raws.push_back(e.path().string());
  }
  if (raws.empty()) {
    score.branch_cov = 0.0;
    return score;
  }
  std::sort(raws.begin(), raws.end());
  const fs::path merged = prof / "merged.profdata";
  ProcessSpec merge;
  merge.argv = {tools.profdata.string(), "merge", "-sparse"};
  merge.argv.insert(merge.argv.end(), raws.begin(), raws.end());
  merge.argv.insert(merge.argv.end(), {"-o", merged.string()});
  merge.timeout = std::chrono::seconds(60);
  const ProcessResult m = RunProcess(merge);
  if (!m.ok()) {
    throw Error(ErrorCode::kCoverageParseError, "llvm-profdata merge failed: " + m.err);
  }
  ProcessSpec exp;
  exp.argv = {tools.cov.string(), "export", "--format=lcov",
              "--instr-profile", merged.string(), b.executable.string()};
  exp.timeout = std::chrono::seconds(60);
  const ProcessResult x = RunProcess(exp);
  if (!x.ok()) {
    throw Error(ErrorCode::kCoverageParseError, "llvm-cov export failed: " + x.err);
  }
  WriteFileAtomic(prof / "coverage.lcov", x.out);
  score.branch_cov =
      BranchCoverage(ParseCoverageReport(x.out), "src/lib.rs", begin, end);
  return score;
}

CoverageReport ParseCoverageReport(std::string_view text) {
  const std::string_view t = Trim(text);
  if (!t.empty() && t.front() == '{') return ParseLlvmCovJson(t);
  return ParseLcov(text);
}

double BranchCoverage(const CoverageReport& report, std::string_view file,
                      std::size_t begin, std::size_t end) {
  const FileCoverage* fc = nullptr;
  for (const auto& [name, cov] : report) {
    if (name == file || (name.size() > file.size() && name.ends_with(file) &&
                         name[name.size() - file.size() - 1] == '/')) {
      fc = &cov;
      break;
    }
  }
  if (fc == nullptr) return 0.0;
  std::size_t sides = 0, taken = 0;
  for (const auto& [line, hits] : fc->branches) {
    if (line < begin || line > end) continue;
    ++sides;
    taken += hits > 0;
  }
  if (sides > 0) return static_cast<double>(taken) / static_cast<double>(sides);
  for (auto it = fc->lines.lower_bound(begin); it != fc->lines.end() && it->first <= end;
       ++it) {
    if (it->second > 0) return 1.0;
  }
  return 0.0;
}

LlvmTools FindLlvmTools(const std::optional<fs::path>& dir) {
  if (dir) {
    auto profdata = ToolIn(*dir, "llvm-profdata");
    auto cov = ToolIn(*dir, "llvm-cov");
    if (profdata && cov) return {*profdata, *cov};
    throw Error(ErrorCode::kCoverageToolMissing,
                "llvm-profdata/llvm-cov not found in " + dir->string());
  }
  std::vector<fs::path> dirs;
  if (const char* env = std::getenv("TESTAUG_LLVM_TOOLS")) dirs.emplace_back(env);
  if (auto bin = RustToolchainBin()) dirs.push_back(*bin);
  for (const fs::path& d : dirs) {
    auto profdata = ToolIn(d, "llvm-profdata");
    auto cov = ToolIn(d, "llvm-cov");
    if (profdata && cov) return {*profdata, *cov};
  }
  auto profdata = FindExecutable("llvm-profdata");
  auto cov = FindExecutable("llvm-cov");
  if (profdata && cov) return {*profdata, *cov};
  throw Error(ErrorCode::kCoverageToolMissing,
              "llvm-profdata/llvm-cov not found; install the llvm-tools "
              "rustup component");
}

EvalReport Aggregate(std::vector<TaskRow> rows) {
  EvalReport r;
  std::size_t compiled = 0, passed = 0, total = 0, compiles = 0;
  double cov = 0;
  for (const TaskRow& row : rows) {
    compiled += row.assertions.compiled;
    passed += row.assertions.passed;
    total += row.assertions.total;
    if (row.function.compiles) {
      ++compiles;
      cov += row.function.branch_cov.value_or(0.0);
    }
  }
  if (total > 0) {
    r.assertion_cr = static_cast<double>(compiled) / static_cast<double>(total);
    r.assertion_acc = static_cast<double>(passed) / static_cast<double>(total);
  }
  if (!rows.empty()) {
    r.function_cr = static_cast<double>(compiles) / static_cast<double>(rows.size());
    r.mean_branch_cov = cov / static_cast<double>(rows.size());
  }
  r.per_task = std::move(rows);
  return r;
}

EvalReport Evaluate(const std::vector<EvalTask>& tasks,
                    const std::vector<Candidate>& candidates,
                    const EvalOptions& opts) {
  std::map<std::string, const EvalTask*> by_id;
  for (const EvalTask& t : tasks) by_id[t.task_id] = &t;
  for (const Candidate& c : candidates) {
    if (!by_id.count(c.task_id)) {
      throw Error(ErrorCode::kInvalidArgument, "candidate for unknown task " + c.task_id);
    }
  }
  WorkDir work(opts.work_dir);
  EvalOptions job_opts = opts;
  if (!job_opts.target_dir) job_opts.target_dir = work.path() / "target";

  const long n = static_cast<long>(candidates.size());
  std::vector<TaskRow> rows(candidates.size());
  std::vector<std::exception_ptr> errors(candidates.size());
  const int jobs = static_cast<int>(std::max<std::size_t>(1, opts.jobs));
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
  for (long i = 0; i < n; ++i) {
    try {
      const Candidate& raw = candidates[i];
      const EvalTask& task = *by_id.at(raw.task_id);
      TaskRow& row = rows[i];
      row.task_id = raw.task_id;
      EvalOptions o = job_opts;
      o.work_dir = work.path() / ("job" + std::to_string(i));
      Candidate c = raw;
      try {
        c = Postprocess(raw, task);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kUnrepairable) throw;
        row.notes.push_back(e.what());
        c.raw_completion = CandidateTestText(task, raw.raw_completion);
      }
      row.assertions = ScoreAssertions(c, task, o);
      if (row.assertions.total < opts.k) {
        row.notes.push_back(std::to_string(row.assertions.total) +
                            " assertions found");
      }
      if (c.processed) row.function = ScoreFunction(c, task, o);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return Aggregate(std::move(rows));
}

std::string ReportJson(const EvalReport& report) {
  json rows = json::array();
  for (const TaskRow& row : report.per_task) {
    rows.push_back({{"task_id", row.task_id},
                    {"compiled", row.assertions.compiled},
                    {"passed", row.assertions.passed},
                    {"total", row.assertions.total},
                    {"compiles", row.function.compiles},
                    {"branch_cov", row.function.branch_cov
                                       ? json(*row.function.branch_cov)
                                       : json(nullptr)},
                    {"notes", row.notes}});
  }
  const BaselineRow& b = kGpt4Baseline;
  json doc{{"assertion_cr", report.assertion_cr},
           {"assertion_acc", report.assertion_acc},
           {"function_cr", report.function_cr},
           {"mean_branch_cov", report.mean_branch_cov},
           {"baseline",
            {{"name", b.name},
             {"assertion_cr", b.assertion_cr / 100},
             {"assertion_acc", b.assertion_acc / 100},
             {"function_cr", b.function_cr / 100},
             {"mean_branch_cov", b.branch_cov / 100}}},
           {"per_task", rows}};
  return doc.dump(2) + "\n";
}

std::string ReportTable(const EvalReport& report) {
  char buf[160];
  std::string out;
  std::snprintf(buf, sizeof(buf), "%-12s %10s %10s %10s %10s\n", "", "Assert.CR",
                "Assert.Acc", "Func.CR", "Cov");
  out += buf;
  std::snprintf(buf, sizeof(buf), "%-12s %10.2f %10.2f %10.2f %10.2f\n",
                "candidates", report.assertion_cr * 100, report.assertion_acc * 100,
                report.function_cr * 100, report.mean_branch_cov * 100);
  out += buf;
  const BaselineRow& b = kGpt4Baseline;
  std::snprintf(buf, sizeof(buf), "%-12s %10.2f %10.2f %10.2f %10.2f\n",
                std::string(b.name).c_str(), b.assertion_cr, b.assertion_acc,
                b.function_cr, b.branch_cov);
  out += buf;
  return out;
}

}  // namespace testaug
