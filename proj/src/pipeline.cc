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
#include "testaug/pipeline.h"

#include <chrono>

#include "json.hpp"
#include "testaug/error.h"
#include "testaug/fuzz_orchestrator.h"
#include "testaug/process.h"
#include "testaug/project_model.h"
#include "testaug/seed_selector.h"
#include "testaug/test_synthesizer.h"

namespace testaug {
namespace {

using json = nlohmann::ordered_json;

fs::path Out(const RunConfig& cfg, std::string_view name) {
  return cfg.output_dir / std::string(name);
}

void WriteResolvedConfig(const RunConfig& cfg) {
  WriteFileAtomic(Out(cfg, kResolvedConfigFile), ResolvedConfigJson(cfg));
}

fs::path WorkDir(const RunConfig& cfg) {
  return fs::absolute(cfg.output_dir / "work");
}

std::optional<std::size_t> FocalCallsFromSidecar(const fs::path& pairs) {
  const fs::path sidecar = StatsSidecarPath(pairs);
  if (!fs::exists(sidecar)) return std::nullopt;
  const json doc = json::parse(ReadFileText(sidecar), nullptr, false);
  if (doc.is_object() && doc.contains("focal_calls_seen") &&
      doc["focal_calls_seen"].is_number_unsigned()) {
    return doc["focal_calls_seen"].get<std::size_t>();
  }
  return std::nullopt;
}

json TargetJson(const TargetReport& t) {
  return {{"package", t.package},       {"target_id", t.target_id},
          {"param_type", t.param_type}, {"status", t.status},
          {"harvested", t.harvested},   {"eligible", t.eligible},
          {"tests", t.tests},           {"pairs", t.pairs},
          {"message", t.message}};
}

}  // namespace

int ExitCodeFor(const Error& e) { return IsEnvironmentError(e.code()) ? 2 : 1; }

MineSummary CmdMine(const RunConfig& cfg) {
  const std::vector<fs::path> packages = DiscoverPackages(cfg.workspace_root);
  MineSummary summary;
  summary.packages = packages.size();
  std::vector<FocalTestPair> pairs;
  for (const fs::path& pkg : packages) {
    const Workspace ws = ScanWorkspace(pkg);
    for (const std::string& d : ws.diagnostics) {
      summary.diagnostics.push_back(ws.package_name + ": " + d);
    }
    MiningResult r = MinePairs(ws, static_cast<int>(cfg.jobs));
    summary.stats.tests_extracted += r.stats.tests_extracted;
    summary.stats.focal_calls_seen += r.stats.focal_calls_seen;
    summary.stats.pairs_formed += r.stats.pairs_formed;
    for (const std::string& d : r.diagnostics) {
      summary.diagnostics.push_back(ws.package_name + ": " + d);
    }
    for (FocalTestPair& p : r.pairs) pairs.push_back(std::move(p));
  }
  summary.pairs_file = Out(cfg, kMinedPairsFile);
  WriteFileAtomic(summary.pairs_file, SerializePairs(pairs));
  const json stats{{"packages", summary.packages},
                   {"tests_extracted", summary.stats.tests_extracted},
                   {"focal_calls_seen", summary.stats.focal_calls_seen},
                   {"pairs_formed", summary.stats.pairs_formed},
                   {"diagnostics", summary.diagnostics}};
  WriteFileAtomic(StatsSidecarPath(summary.pairs_file), stats.dump(2) + "\n");
  WriteResolvedConfig(cfg);
  return summary;
}

AugmentSummary CmdAugment(const RunConfig& cfg) {
  SelectionConfig sel;
  sel.n_samples = cfg.n_samples;
  sel.max_len = cfg.max_len;
  sel.rng_seed = cfg.rng_seed;
  ValidateSelectionConfig(sel);

  const std::vector<fs::path> packages = DiscoverPackages(cfg.workspace_root);
  AugmentSummary summary;
  summary.packages = packages.size();
  std::vector<FocalTestPair> all_pairs;
  const fs::path work = WorkDir(cfg);
  for (const fs::path& pkg : packages) {
    const Workspace ws = ScanWorkspace(pkg);
    if (ws.fuzz_target_files.empty()) continue;

    FuzzConfig fc;
    fc.timeout = std::chrono::seconds(cfg.timeout_secs);
    fc.jobs = static_cast<int>(cfg.jobs);
    fc.work_dir = work / ws.package_name;
    fc.report_below_len = cfg.max_len;
    fc.toolchain.command = SplitCommand(cfg.fuzz_command);
    fc.toolchain.target_dir =
        cfg.cargo_target_dir ? fs::absolute(*cfg.cargo_target_dir)
                             : work / "cargo-target";
    FuzzSession session(ws, fc);
    for (const std::string& d : session.diagnostics()) {
      summary.diagnostics.push_back(ws.package_name + ": " + d);
    }
    summary.targets += session.targets().size();
    bool any_supported = false;
    for (const FuzzTargetUnit& unit : session.targets()) {
      if (unit.param_type.supported()) {
        any_supported = true;
        continue;
      }
      TargetReport rep;
      rep.package = ws.package_name;
      rep.target_id = unit.id;
      rep.param_type = ParamTypeName(unit.param_type);
      rep.status = "unsupported";
      summary.per_target.push_back(std::move(rep));
    }
    if (!any_supported) continue;

    for (const TargetRun& run : session.FuzzAll()) {
      const FuzzTargetUnit* unit = nullptr;
      for (const FuzzTargetUnit& u : session.targets()) {
        if (u.id == run.target_id) unit = &u;
      }
      TargetReport rep;
      rep.package = ws.package_name;
      rep.target_id = run.target_id;
      rep.param_type = ParamTypeName(unit->param_type);
      for (const std::string& d : run.diagnostics) {
        summary.diagnostics.push_back(ws.package_name + ": " + d);
      }
      if (run.error) {
        rep.status = "run-failed";
        rep.message = run.error->what();
        summary.diagnostics.push_back(ws.package_name + ": " + rep.message);
        summary.per_target.push_back(std::move(rep));
        continue;
      }
      rep.harvested = run.inputs.size();
      summary.seeds_harvested += run.inputs.size();
      const Selection selection = SelectSeeds(run.inputs, sel);
      rep.eligible = selection.eligible;
      for (const std::string& d : selection.diagnostics) {
        summary.diagnostics.push_back(ws.package_name + ": " + run.target_id +
                                      ": " + d);
      }
      const TestTemplate tpl = Transform(*unit);
      const std::vector<UnitTestFn> tests = Instantiate(tpl, selection.seeds);
      rep.tests = tests.size();
      summary.tests_generated += tests.size();
      if (!tests.empty()) {
        WriteFileAtomic(cfg.output_dir / std::string(kAugmentedTestsDir) /
                            ws.package_name / (tpl.name_prefix + ".rs"),
                        RenderTestFile(tpl, tests));
      }
      std::vector<std::string> notes;
      std::vector<FocalTestPair> pairs = PairAugmented(tests, *unit, ws, &notes);
      rep.pairs = pairs.size();
      summary.pairs_formed += pairs.size();
      rep.status = pairs.empty() && !tests.empty() ? "unpaired" : "ok";
      for (const std::string& n : notes) {
        rep.message = n;
        summary.diagnostics.push_back(ws.package_name + ": " + n);
      }
      for (FocalTestPair& p : pairs) all_pairs.push_back(std::move(p));
      summary.per_target.push_back(std::move(rep));
    }
  }
  summary.pairs_file = Out(cfg, kAugmentedPairsFile);
  WriteFileAtomic(summary.pairs_file, SerializePairs(all_pairs));
  json targets = json::array();
  for (const TargetReport& t : summary.per_target) targets.push_back(TargetJson(t));
  const json stats{{"packages", summary.packages},
                   {"targets", summary.targets},
                   {"seeds_harvested", summary.seeds_harvested},
                   {"tests_generated", summary.tests_generated},
                   {"focal_calls_seen", summary.tests_generated},
                   {"pairs_formed", summary.pairs_formed},
                   {"per_target", targets},
                   {"diagnostics", summary.diagnostics}};
  WriteFileAtomic(StatsSidecarPath(summary.pairs_file), stats.dump(2) + "\n");
  WriteResolvedConfig(cfg);
  return summary;
}

BuildResult CmdBuildDataset(const RunConfig& cfg, const BuildInputs& inputs) {
  std::vector<FocalTestPair> pairs;
  FocalCallCounts calls;
  std::size_t found = 0;
  const auto load = [&](const std::optional<fs::path>& given,
                        std::string_view default_name,
                        std::optional<std::size_t>& count) {
    const fs::path path = given ? *given : Out(cfg, default_name);
    if (!fs::exists(path)) {
      if (given) {
        throw Error(ErrorCode::kIoError, "pairs file not found: " + path.string());
      }
      return;
    }
    ++found;
    for (FocalTestPair& p : ReadPairsFile(path)) pairs.push_back(std::move(p));
    count = FocalCallsFromSidecar(path);
  };
  load(inputs.mined, kMinedPairsFile, calls.mined);
  load(inputs.augmented, kAugmentedPairsFile, calls.augmented);
  if (found == 0) {
    throw Error(ErrorCode::kIoError,
                "no pairs files: run mine/augment first or pass --mined/--augmented");
  }
  BuildResult result = Build(pairs, cfg.token_budget, nullptr, calls);
  WriteDataset(Out(cfg, kDatasetFile), result);
  WriteResolvedConfig(cfg);
  return result;
}

EvalReport CmdEvaluate(const RunConfig& cfg, const fs::path& tasks_dir,
                       const fs::path& candidates_file) {
  const std::vector<EvalTask> tasks = LoadTasks(tasks_dir);
  const std::vector<Candidate> candidates = LoadCandidates(candidates_file);
  EvalOptions opts;
  opts.work_dir = WorkDir(cfg) / "eval";
  opts.jobs = cfg.jobs;
  opts.llvm_tools_dir = cfg.llvm_tools_dir;
  if (cfg.cargo_target_dir) opts.target_dir = fs::absolute(*cfg.cargo_target_dir) / "eval";
  if (!candidates.empty()) {
    const LlvmTools tools = FindLlvmTools(opts.llvm_tools_dir);
    opts.llvm_tools_dir = tools.cov.parent_path();
  }
  const EvalReport report = Evaluate(tasks, candidates, opts);
  WriteFileAtomic(Out(cfg, kEvalReportFile), ReportJson(report));
  WriteFileAtomic(Out(cfg, kEvalTableFile), ReportTable(report));
  WriteResolvedConfig(cfg);
  return report;
}

}  // namespace testaug
