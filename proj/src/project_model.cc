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

#include "testaug/project_model.h"

#include <unistd.h>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <system_error>

#include "testaug/error.h"
#include "testaug/process.h"

namespace testaug {
namespace {

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<std::string> TomlString(std::string_view value) {
  std::string v = Trim(value);
  if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') &&
      v.back() == v.front()) {
    return v.substr(1, v.size() - 2);
  }
  return std::nullopt;
}

bool IsUnder(const fs::path& root, const fs::path& p) {
  std::error_code ec;
  const fs::path r = fs::weakly_canonical(root, ec);
  const fs::path c = fs::weakly_canonical(p, ec);
  if (ec) return false;
  auto rit = r.begin();
  auto cit = c.begin();
  for (; rit != r.end(); ++rit, ++cit) {
    if (cit == c.end() || *rit != *cit) return false;
  }
  return true;
}

bool SkippedDirName(const std::string& name) {
  return name.empty() || name[0] == '.' || name == "target";
}

void CollectRustFiles(const fs::path& root, const fs::path& dir,
                      std::vector<fs::path>& out,
                      std::vector<std::string>& diagnostics) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return;
  fs::recursive_directory_iterator it(
      dir, fs::directory_options::skip_permission_denied, ec);
  if (ec) {
    throw Error(ErrorCode::kIoError, dir.string() + ": " + ec.message());
  }
  for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec) {
      diagnostics.push_back("unreadable: " + it->path().string());
      ec.clear();
      continue;
    }
    const fs::directory_entry& entry = *it;
    if (entry.is_directory() && !entry.is_symlink()) {
      if (SkippedDirName(entry.path().filename().string())) {
        it.disable_recursion_pending();
      }
      continue;
    }
    if (entry.path().extension() != ".rs") continue;
    if (entry.is_symlink() && !IsUnder(root, entry.path())) {
      diagnostics.push_back("symlink escapes root, skipped: " +
                            entry.path().string());
      continue;
    }
    if (!entry.is_regular_file()) continue;
    out.push_back(entry.path());
  }
}

}  // namespace

const SourceFile* Workspace::FindFile(const fs::path& path) const {
  for (const SourceFile& f : source_files) {
    if (f.path == path) return &f;
  }
  return nullptr;
}

void CopyWorkspaceTree(const fs::path& from, const fs::path& to) {
  std::error_code ec;
  fs::remove_all(to, ec);
  fs::create_directories(to, ec);
  if (ec) {
    throw Error(ErrorCode::kIoError, "cannot create " + to.string() + ": " +
                                         ec.message());
  }
  fs::recursive_directory_iterator it(from, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot read " + from.string());
  for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec) throw Error(ErrorCode::kIoError, ec.message());
    const fs::path rel = it->path().lexically_relative(from);
    const std::string name = it->path().filename().string();
    if (it->is_directory()) {
      const bool skip = SkippedDirName(name) ||
                        (name == "artifacts" && rel.parent_path() == "fuzz");
      if (skip) {
        it.disable_recursion_pending();
        continue;
      }
      fs::create_directories(to / rel);
    } else if (it->is_regular_file()) {
      fs::copy_file(it->path(), to / rel, fs::copy_options::overwrite_existing,
                    ec);
      if (ec) {
        throw Error(ErrorCode::kIoError,
                    "copy " + it->path().string() + ": " + ec.message());
      }
    }
  }
}

std::string ReadFileText(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteFileAtomic(const fs::path& path, const std::string& contents) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  const fs::path tmp =
      path.string() + ".tmp." + std::to_string(static_cast<long>(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + tmp.string());
    out << contents;
    if (!out.flush()) {
      throw Error(ErrorCode::kIoError, "short write to " + tmp.string());
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    throw Error(ErrorCode::kIoError,
                "rename to " + path.string() + ": " + ec.message());
  }
}

Manifest ParseManifest(const std::string& toml_text) {
  Manifest m;
  std::istringstream in(toml_text);
  std::string raw;
  std::string table;
  bool in_bin = false;
  while (std::getline(in, raw)) {
    std::string line = Trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.starts_with("[[")) {
      const auto close = line.find("]]");
      table = Trim(line.substr(2, close == std::string::npos ? std::string::npos
                                                              : close - 2));
      in_bin = table == "bin";
      if (in_bin) m.bins.emplace_back();
      continue;
    }
    if (line[0] == '[') {
      const auto close = line.find(']');
      table = Trim(line.substr(1, close == std::string::npos ? std::string::npos
                                                             : close - 1));
      in_bin = false;
      if (table == "workspace") m.is_workspace = true;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = Trim(line.substr(0, eq));
    const auto value = TomlString(line.substr(eq + 1));
    if (!value) continue;
    if (table == "package" && key == "name") m.package_name = *value;
    if (in_bin && key == "name") m.bins.back().name = *value;
    if (in_bin && key == "path") m.bins.back().path = *value;
  }
  return m;
}

std::vector<std::string> FileModulePath(const fs::path& root,
                                        const fs::path& file) {
  std::error_code ec;
  const fs::path rel = fs::relative(file, root / "src", ec);
  std::vector<std::string> out;
  if (ec || rel.empty() || rel.begin()->string() == "..") return out;
  for (const auto& part : rel) out.push_back(part.string());
  std::string& last = out.back();
  if (last.ends_with(".rs")) last.resize(last.size() - 3);
  if (out.size() == 1 && (last == "lib" || last == "main")) return {};
  if (last == "mod") out.pop_back();
  return out;
}

Workspace ScanWorkspace(const fs::path& root) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw Error(ErrorCode::kIoError, root.string() + " is not a directory");
  }
  const fs::path manifest_path = root / "Cargo.toml";
  if (!fs::is_regular_file(manifest_path, ec)) {
    throw Error(ErrorCode::kMissingManifest,
                "no Cargo.toml in " + root.string());
  }
  Workspace ws;
  ws.root_path = fs::absolute(root).lexically_normal();
  if (!ws.root_path.has_filename()) ws.root_path = ws.root_path.parent_path();
  const Manifest manifest = ParseManifest(ReadFileText(manifest_path));
  ws.package_name = manifest.package_name.value_or(
      ws.root_path.filename().string());

  std::vector<fs::path> files;
  CollectRustFiles(ws.root_path, ws.root_path / "src", files, ws.diagnostics);
  CollectRustFiles(ws.root_path, ws.root_path / "tests", files, ws.diagnostics);
  std::sort(files.begin(), files.end());
  for (const fs::path& path : files) {
    SourceFile sf;
    sf.path = path;
    try {
      sf.text = ReadFileText(path);
    } catch (const Error& e) {
      ws.diagnostics.push_back(e.what());
      continue;
    }
    std::string err;
    sf.syntax = rust::TokenStream::TryParse(sf.text, &err);
    if (!sf.syntax) {
      sf.parse_error = err;
      ws.diagnostics.push_back("parse failure in " + path.string() + ": " +
                               err);
    }
    ws.source_files.push_back(std::move(sf));
  }

  const fs::path fuzz_manifest = ws.fuzz_dir() / "Cargo.toml";
  if (fs::is_regular_file(fuzz_manifest, ec)) {
    const Manifest fm = ParseManifest(ReadFileText(fuzz_manifest));
    for (const BinTarget& bin : fm.bins) {
      if (bin.path.empty()) continue;
      const fs::path p = (ws.fuzz_dir() / bin.path).lexically_normal();
      if (!IsUnder(ws.root_path, p)) {
        ws.diagnostics.push_back("fuzz target outside root, skipped: " +
                                 p.string());
        continue;
      }
      if (!fs::is_regular_file(p, ec)) {
        ws.diagnostics.push_back("declared fuzz target missing: " + p.string());
        continue;
      }
      ws.fuzz_target_files.push_back(p);
    }
    std::sort(ws.fuzz_target_files.begin(), ws.fuzz_target_files.end());
    ws.fuzz_target_files.erase(
        std::unique(ws.fuzz_target_files.begin(), ws.fuzz_target_files.end()),
        ws.fuzz_target_files.end());
  }
  return ws;
}

std::vector<fs::path> DiscoverPackages(const fs::path& root) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw Error(ErrorCode::kIoError, root.string() + " is not a directory");
  }
  std::vector<fs::path> out;
  auto consider = [&](const fs::path& dir) {
    const fs::path manifest = dir / "Cargo.toml";
    if (!fs::is_regular_file(manifest, ec)) return;
    if (ParseManifest(ReadFileText(manifest)).package_name) {
      out.push_back(fs::absolute(dir).lexically_normal());
    }
  };
  consider(root);
  fs::recursive_directory_iterator it(
      root, fs::directory_options::skip_permission_denied, ec);
  for (; !ec && it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (!it->is_directory() || it->is_symlink()) continue;
    const std::string name = it->path().filename().string();
    if (SkippedDirName(name) || name == "fuzz" || name == "src") {
      it.disable_recursion_pending();
      continue;
    }
    consider(it->path());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) {
    throw Error(ErrorCode::kMissingManifest,
                "no Cargo package under " + root.string());
  }
  return out;
}

void RequireFuzzToolchain(const FuzzToolchain& toolchain) {
  if (toolchain.command.empty() || !FindExecutable(toolchain.command[0])) {
    throw Error(ErrorCode::kToolchainMissing,
                "fuzz runner '" +
                    (toolchain.command.empty() ? std::string()
                                               : toolchain.command[0]) +
                    "' not on PATH");
  }
  ProcessSpec spec;
  spec.argv = toolchain.command;
  spec.argv.push_back("--version");
  spec.timeout = std::chrono::seconds(60);
  if (!RunProcess(spec).ok()) {
    throw Error(ErrorCode::kToolchainMissing,
                "fuzz runner subcommand unavailable");
  }
}

bool CheckBuildable(Workspace& ws, const FuzzToolchain& toolchain) {
  if (ws.buildable) return *ws.buildable;
  RequireFuzzToolchain(toolchain);
  std::error_code ec;
  if (!fs::is_regular_file(ws.fuzz_dir() / "Cargo.toml", ec)) {
    ws.diagnostics.push_back("no fuzz harness manifest");
    ws.buildable = false;
    return false;
  }
  ProcessSpec spec;
  spec.argv = toolchain.command;
  spec.argv.insert(spec.argv.end(), {"build", "--sanitizer", toolchain.sanitizer});
  if (toolchain.target_dir) {
    spec.argv.push_back("--target-dir");
    spec.argv.push_back(toolchain.target_dir->string());
  }
  spec.cwd = ws.root_path;
  spec.timeout = toolchain.build_timeout;
  const ProcessResult r = RunProcess(spec);
  ws.buildable = r.ok();
  if (!r.ok()) {
    const std::string& log = r.err;
    ws.diagnostics.push_back(
        "fuzz build failed: " +
        log.substr(log.size() > 2000 ? log.size() - 2000 : 0));
  }
  return *ws.buildable;
}

}  // namespace testaug
