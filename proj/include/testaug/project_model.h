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

#ifndef TESTAUG_PROJECT_MODEL_H_
#define TESTAUG_PROJECT_MODEL_H_

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "testaug/rust_syntax.h"

namespace testaug {

namespace fs = std::filesystem;

struct SourceFile {
  fs::path path;
  std::string text;
  // Present iff `text` lexed with balanced delimiters.
  std::optional<rust::TokenStream> syntax;
  std::string parse_error;
};

struct Workspace {
  fs::path root_path;
  std::string package_name;
  std::vector<SourceFile> source_files;
  std::vector<fs::path> fuzz_target_files;
  std::vector<std::string> diagnostics;
  // Cached result of CheckBuildable.
  std::optional<bool> buildable;

  fs::path fuzz_dir() const { return root_path / "fuzz"; }
  const SourceFile* FindFile(const fs::path& path) const;
};

// How the external fuzz runner is invoked.
struct FuzzToolchain {
  std::vector<std::string> command = {"cargo", "fuzz"};
  std::string sanitizer = "none";
  // Shared cargo target directory; lets workspace copies reuse builds.
  std::optional<fs::path> target_dir;
  std::chrono::seconds build_timeout{1800};
};

struct BinTarget {
  std::string name;
  std::string path;
};

// The subset of a Cargo manifest this tool reads.
struct Manifest {
  std::optional<std::string> package_name;
  bool is_workspace = false;
  std::vector<BinTarget> bins;
};

Manifest ParseManifest(const std::string& toml_text);

// Throws Error(kMissingManifest) without Cargo.toml, Error(kIoError) when
// root is not a readable directory.
Workspace ScanWorkspace(const fs::path& root);

// Every package directory under root (root included), skipping build output,
// hidden directories and fuzz harness packages. Sorted.
std::vector<fs::path> DiscoverPackages(const fs::path& root);

// Runs the fuzz build once and caches the outcome on `ws`. Throws
// Error(kToolchainMissing) when the runner is unavailable.
bool CheckBuildable(Workspace& ws, const FuzzToolchain& toolchain);

// Throws Error(kToolchainMissing) unless `<command> --version` succeeds.
void RequireFuzzToolchain(const FuzzToolchain& toolchain);

// Module path of a source file relative to the crate root, e.g.
// src/engine.rs -> {"engine"}, src/a/mod.rs -> {"a"}, src/lib.rs -> {}.
std::vector<std::string> FileModulePath(const fs::path& root,
                                        const fs::path& file);

// Copies a package tree for scratch builds, leaving out build output, hidden
// directories and fuzzer artifacts. `to` is replaced if it exists.
void CopyWorkspaceTree(const fs::path& from, const fs::path& to);

std::string ReadFileText(const fs::path& path);

// Writes via a sibling temporary file and rename.
void WriteFileAtomic(const fs::path& path, const std::string& contents);

}  // namespace testaug

#endif  // TESTAUG_PROJECT_MODEL_H_
