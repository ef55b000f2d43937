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

#include <gtest/gtest.h>

#include "testaug/error.h"
#include "test_util.h"

namespace testaug {
namespace {

using testing::FixturePath;
using testing::TempDir;
using testing::WriteText;

TEST(ParseManifestTest, ReadsPackageAndBins) {
  const Manifest m = ParseManifest(R"(
[package]
name = "demo-crate"
version = "0.1.0"

[dependencies]
name = "not-this"

[workspace]

[[bin]]
name = "t1"
path = "fuzz_targets/t1.rs"
test = false

[[bin]]
name = 't2'
path = 'fuzz_targets/t2.rs'
)");
  EXPECT_EQ(m.package_name, "demo-crate");
  EXPECT_TRUE(m.is_workspace);
  ASSERT_EQ(m.bins.size(), 2u);
  EXPECT_EQ(m.bins[0].name, "t1");
  EXPECT_EQ(m.bins[1].path, "fuzz_targets/t2.rs");
}

TEST(ParseManifestTest, VirtualManifestHasNoPackage) {
  EXPECT_FALSE(ParseManifest("[workspace]\nmembers = [\"a\"]\n").package_name);
}

TEST(ScanWorkspaceTest, FixtureCrate) {
  const Workspace ws = ScanWorkspace(FixturePath("crates/b64lite"));
  EXPECT_EQ(ws.package_name, "b64lite");
  EXPECT_EQ(ws.source_files.size(), 5u);
  for (const SourceFile& f : ws.source_files) {
    EXPECT_TRUE(f.syntax.has_value()) << f.path;
  }
  ASSERT_EQ(ws.fuzz_target_files.size(), 2u);
  EXPECT_EQ(ws.fuzz_target_files[0].filename(), "decode_random.rs");
  EXPECT_EQ(ws.fuzz_target_files[1].filename(), "roundtrip.rs");
  EXPECT_TRUE(ws.root_path.is_absolute());
}

TEST(ScanWorkspaceTest, MissingManifest) {
  TempDir dir;
  try {
    ScanWorkspace(dir.path());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingManifest);
  }
}

TEST(ScanWorkspaceTest, NotADirectory) {
  try {
    ScanWorkspace("/nonexistent/testaug");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIoError);
  }
}

TEST(ScanWorkspaceTest, ParseFailuresBecomeDiagnostics) {
  TempDir dir;
  WriteText(dir / "Cargo.toml", "[package]\nname = \"x\"\n");
  WriteText(dir / "src/lib.rs", "pub fn ok() {}\n");
  WriteText(dir / "src/bad.rs", "fn broken( {\n");
  WriteText(dir / "target/debug/gen.rs", "fn junk() {}\n");
  const Workspace ws = ScanWorkspace(dir.path());
  ASSERT_EQ(ws.source_files.size(), 2u);
  EXPECT_FALSE(ws.source_files[0].syntax.has_value());
  EXPECT_FALSE(ws.diagnostics.empty());
  EXPECT_TRUE(ws.fuzz_target_files.empty());
}

TEST(ScanWorkspaceTest, FuzzTargetsOutsideRootRejected) {
  TempDir dir;
  WriteText(dir / "Cargo.toml", "[package]\nname = \"x\"\n");
  WriteText(dir / "fuzz/Cargo.toml",
            "[[bin]]\nname = \"a\"\npath = \"../../escape.rs\"\n"
            "[[bin]]\nname = \"b\"\npath = \"fuzz_targets/b.rs\"\n");
  WriteText(dir / "fuzz/fuzz_targets/b.rs", "fuzz_target!(|d| {});\n");
  const Workspace ws = ScanWorkspace(dir.path());
  ASSERT_EQ(ws.fuzz_target_files.size(), 1u);
  EXPECT_EQ(ws.fuzz_target_files[0].filename(), "b.rs");
}

TEST(DiscoverPackagesTest, FindsNestedPackagesSkippingFuzz) {
  TempDir dir;
  WriteText(dir / "Cargo.toml", "[workspace]\nmembers = [\"a\", \"b\"]\n");
  WriteText(dir / "a/Cargo.toml", "[package]\nname = \"a\"\n");
  WriteText(dir / "a/fuzz/Cargo.toml", "[package]\nname = \"a-fuzz\"\n");
  WriteText(dir / "b/Cargo.toml", "[package]\nname = \"b\"\n");
  const auto pkgs = DiscoverPackages(dir.path());
  ASSERT_EQ(pkgs.size(), 2u);
  EXPECT_EQ(pkgs[0].filename(), "a");
  EXPECT_EQ(pkgs[1].filename(), "b");
}

TEST(FileModulePathTest, Layouts) {
  const fs::path root = "/r";
  EXPECT_TRUE(FileModulePath(root, "/r/src/lib.rs").empty());
  EXPECT_EQ(FileModulePath(root, "/r/src/engine.rs"),
            std::vector<std::string>{"engine"});
  EXPECT_EQ(FileModulePath(root, "/r/src/a/mod.rs"),
            std::vector<std::string>{"a"});
  EXPECT_EQ(FileModulePath(root, "/r/src/a/b.rs"),
            (std::vector<std::string>{"a", "b"}));
  EXPECT_TRUE(FileModulePath(root, "/r/tests/t.rs").empty());
}

TEST(WriteFileAtomicTest, CreatesParentsAndReplaces) {
  TempDir dir;
  const fs::path p = dir / "deep/out.txt";
  WriteFileAtomic(p, "one");
  WriteFileAtomic(p, "two");
  EXPECT_EQ(ReadFileText(p), "two");
  EXPECT_EQ(std::distance(fs::directory_iterator(p.parent_path()),
                          fs::directory_iterator()),
            1);
}

}  // namespace
}  // namespace testaug
