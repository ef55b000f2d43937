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
// testaug: mine, augment, build-dataset and evaluate from the command line.
// Exit status 0 on success, 1 for user errors, 2 for toolchain or
// environment failures.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "testaug/error.h"
#include "testaug/pipeline.h"
#include "testaug/run_config.h"

namespace {

using testaug::ConfigLayer;
using testaug::RunConfig;
namespace fs = std::filesystem;

void AddConfigFlag(CLI::App& app, ConfigLayer& flags, const std::string& name,
                   const std::string& field, const std::string& help) {
  app.add_option_function<std::string>(
      name, [&flags, field](const std::string& v) { flags[field] = v; }, help);
}

void PrintDiagnostics(const std::vector<std::string>& diagnostics) {
  for (const std::string& d : diagnostics) std::cerr << "note: " << d << "\n";
}

int Main(int argc, char** argv) {
  CLI::App app{"Fuzzing-driven unit test augmentation for Rust crates"};
  app.require_subcommand(1);
  app.fallthrough();

  ConfigLayer flags;
  std::string config_file;
  app.add_option("--config", config_file, "JSON file with RunConfig fields");
  AddConfigFlag(app, flags, "-w,--workspace", "workspace_root",
                "Crate or directory of crates to process");
  AddConfigFlag(app, flags, "-o,--output", "output_dir", "Output directory");
  AddConfigFlag(app, flags, "-n,--n-samples", "n_samples",
                "Seeds sampled per fuzz target (default 40)");
  AddConfigFlag(app, flags, "--max-len", "max_len",
                "Seeds must be shorter than this many bytes (default 64)");
  AddConfigFlag(app, flags, "-t,--timeout", "timeout_secs",
                "Fuzzing time per target in seconds (default 60)");
  AddConfigFlag(app, flags, "--rng-seed", "rng_seed",
                "Seed for sampling (default 0)");
  AddConfigFlag(app, flags, "--token-budget", "token_budget",
                "Drop records longer than this (default 512)");
  AddConfigFlag(app, flags, "-j,--jobs", "jobs", "Worker pool size (default 1)");
  AddConfigFlag(app, flags, "--cargo-target-dir", "cargo_target_dir",
                "Shared cargo target directory");
  AddConfigFlag(app, flags, "--fuzz-command", "fuzz_command",
                "Fuzz runner command (default \"cargo fuzz\")");
  AddConfigFlag(app, flags, "--llvm-tools-dir", "llvm_tools_dir",
                "Directory holding llvm-profdata and llvm-cov");

  CLI::App* mine = app.add_subcommand("mine", "Mine focal/test pairs");
  CLI::App* augment =
      app.add_subcommand("augment", "Fuzz targets and turn seeds into tests");
  CLI::App* build =
      app.add_subcommand("build-dataset", "Merge pairs into a training set");
  std::optional<std::string> mined_in, augmented_in;
  build->add_option("--mined", mined_in, "Mined pairs file");
  build->add_option("--augmented", augmented_in, "Augmented pairs file");
  CLI::App* evaluate =
      app.add_subcommand("evaluate", "Score generated tests against tasks");
  std::string tasks_dir, candidates;
  evaluate->add_option("--tasks", tasks_dir, "Directory of task files")
      ->required();
  evaluate->add_option("--candidates", candidates,
                       "JSONL file of {task_id, completion}")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const ConfigLayer file =
        config_file.empty() ? ConfigLayer{} : testaug::ReadConfigFile(config_file);
    const RunConfig cfg = testaug::ResolveConfig(
        file, testaug::EnvironmentLayer([](const char* n) { return std::getenv(n); }),
        flags);

    if (mine->parsed()) {
      const auto s = testaug::CmdMine(cfg);
      PrintDiagnostics(s.diagnostics);
      std::cout << "mined " << s.stats.pairs_formed << " pairs from "
                << s.stats.tests_extracted << " tests ("
                << s.stats.focal_calls_seen << " with focal calls) in "
                << s.packages << " packages -> " << s.pairs_file.string() << "\n";
    } else if (augment->parsed()) {
      const auto s = testaug::CmdAugment(cfg);
      PrintDiagnostics(s.diagnostics);
      std::cout << "augmented " << s.tests_generated << " tests, "
                << s.pairs_formed << " pairs from " << s.targets
                << " fuzz targets (" << s.seeds_harvested
                << " seeds harvested) -> " << s.pairs_file.string() << "\n";
    } else if (build->parsed()) {
      testaug::BuildInputs in;
      if (mined_in) in.mined = *mined_in;
      if (augmented_in) in.augmented = *augmented_in;
      const auto r = testaug::CmdBuildDataset(cfg, in);
      PrintDiagnostics(r.stats.warnings);
      std::cout << "wrote " << r.records.size() << " records ("
                << r.stats.total.n_dropped << " over budget) -> "
                << (cfg.output_dir / std::string(testaug::kDatasetFile)).string()
                << "\n";
    } else if (evaluate->parsed()) {
      const auto report = testaug::CmdEvaluate(cfg, tasks_dir, candidates);
      std::cout << testaug::ReportTable(report);
    }
  } catch (const testaug::Error& e) {
    std::cerr << "testaug: " << e.what() << "\n";
    return testaug::ExitCodeFor(e);
  } catch (const std::exception& e) {
    std::cerr << "testaug: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return Main(argc, argv); }
