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

#include "testaug/test_synthesizer.h"

#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <random>

#include "testaug/error.h"
#include "testaug/process.h"
#include "testaug/rust_syntax.h"

namespace testaug {
namespace {

using rust::TokenStream;

// Decodes one UTF-8 scalar at s[i]; returns its length, or 0 if invalid.
std::size_t DecodeUtf8(std::span<const std::uint8_t> s, std::size_t i,
                       char32_t& cp) {
  const std::uint8_t b0 = s[i];
  std::size_t len;
  char32_t min;
  if (b0 < 0x80) {
    cp = b0;
    return 1;
  } else if ((b0 & 0xe0) == 0xc0) {
    len = 2, cp = b0 & 0x1f, min = 0x80;
  } else if ((b0 & 0xf0) == 0xe0) {
    len = 3, cp = b0 & 0x0f, min = 0x800;
  } else if ((b0 & 0xf8) == 0xf0) {
    len = 4, cp = b0 & 0x07, min = 0x10000;
  } else {
    return 0;
  }
  if (i + len > s.size()) return 0;
  for (std::size_t k = 1; k < len; ++k) {
    if ((s[i + k] & 0xc0) != 0x80) return 0;
    cp = (cp << 6) | (s[i + k] & 0x3f);
  }
  if (cp < min || cp > 0x10ffff || (cp >= 0xd800 && cp <= 0xdfff)) return 0;
  return len;
}

std::string Indent(std::string_view stmt) { return "    " + std::string(stmt); }

// `mod name;` with optional visibility and no attributes.
std::optional<std::string> OutOfLineModName(const TokenStream& ts) {
  std::size_t i = 0;
  if (ts.Is(i, "pub")) {
    ++i;
    if (i < ts.size() && ts.IsOpen(i, '(')) i = ts[i].match + 1;
  }
  if (ts.size() == i + 3 && ts.Is(i, "mod") && ts.IsIdent(i + 1) &&
      ts.Is(i + 2, ";")) {
    return std::string(ts.Text(i + 1));
  }
  return std::nullopt;
}

std::string RewritePreamble(const FuzzTargetUnit& t) {
  const fs::path dir = fs::absolute(t.file).parent_path();
  std::string out;
  for (const std::string& item : t.preamble) {
    auto ts = TokenStream::TryParse(item);
    if (!ts || ts->size() == 0) continue;
    if (ts->Is(0, "#") && ts->Is(1, "!")) continue;
    bool fuzz_only = false;
    for (std::size_t i = 0; i < ts->size(); ++i) {
      if (ts->IsIdent(i) && ts->Text(i) == "libfuzzer_sys") fuzz_only = true;
    }
    if (fuzz_only) continue;
    if (auto mod = OutOfLineModName(*ts)) {
      fs::path file = dir / (*mod + ".rs");
      if (!fs::exists(file)) file = dir / *mod / "mod.rs";
      out += "#[path = \"" + file.string() + "\"]\n";
    }
    out += item;
    out += '\n';
  }
  return out;
}

}  // namespace

std::string SanitizeIdent(std::string_view id) {
  std::string out;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '_';
    out.push_back(ok ? c : '_');
  }
  if (out.empty()) return "target";
  if (out[0] >= '0' && out[0] <= '9') out.insert(0, "t_");
  return out;
}

TestTemplate Transform(const FuzzTargetUnit& t) {
  if (!t.param_type.supported()) {
    throw Error(ErrorCode::kUnsupportedParam,
                t.id + ": parameter type " + t.param_type.descriptor);
  }
  TestTemplate tpl;
  tpl.target_id = t.id;
  tpl.name_prefix = SanitizeIdent(t.id);
  tpl.header = "#[test]\nfn " + tpl.name_prefix + "_template() {";
  const std::string type =
      t.param_type.kind == ParamKind::kText ? "&str" : "&[u8]";
  tpl.data_binding =
      "let " + t.param_name + ": " + type + " = " + tpl.data_slot + ";";
  tpl.body = t.body;
  tpl.preamble = RewritePreamble(t);
  tpl.param_type = t.param_type;
  return tpl;
}

std::string RenderTest(const TestTemplate& tpl, std::string_view name,
                       std::string_view literal) {
  std::string binding = tpl.data_binding;
  const std::size_t slot = binding.find(tpl.data_slot);
  binding.replace(slot, tpl.data_slot.size(), literal);
  std::string out = "#[test]\nfn " + std::string(name) + "() {\n";
  out += Indent(binding) + "\n";
  for (const std::string& stmt : tpl.body) out += Indent(stmt) + "\n";
  out += "}";
  return out;
}

std::string RenderTemplate(const TestTemplate& tpl) {
  return RenderTest(tpl, tpl.name_prefix + "_template", tpl.data_slot);
}

std::string RenderLiteral(const ParamType& type,
                          std::span<const std::uint8_t> bytes) {
  std::string out;
  if (type.kind != ParamKind::kText) {
    out = "&[";
    for (std::size_t i = 0; i < bytes.size(); ++i) {
      if (i > 0) out.push_back(',');
      out += std::to_string(bytes[i]);
    }
    out.push_back(']');
    return out;
  }
  out.push_back('"');
  std::size_t i = 0;
  while (i < bytes.size()) {
    char32_t cp = 0;
    std::size_t len = DecodeUtf8(bytes, i, cp);
    if (len == 0) {
      cp = 0xfffd;
      len = 1;
    }
    i += len;
    switch (cp) {
      case '"': out += "\\\""; continue;
      case '\\': out += "\\\\"; continue;
      case '\n': out += "\\n"; continue;
      case '\r': out += "\\r"; continue;
      case '\t': out += "\\t"; continue;
      case 0: out += "\\0"; continue;
      default: break;
    }
    if (cp >= 0x20 && cp < 0x7f) {
      out.push_back(static_cast<char>(cp));
    } else {
      char buf[16];
      std::snprintf(buf, sizeof(buf), "\\u{%x}", static_cast<unsigned>(cp));
      out += buf;
    }
  }
  out.push_back('"');
  return out;
}

std::vector<UnitTestFn> Instantiate(const TestTemplate& tpl,
                                    const std::vector<SeedInput>& seeds) {
  std::vector<UnitTestFn> out;
  out.reserve(seeds.size());
  std::size_t assertions = 0;
  if (auto ts = TokenStream::TryParse(RenderTemplate(tpl));
      ts && ts->size() > 0) {
    assertions =
        rust::FindMacroCalls(*ts, 0, ts->size() - 1, kAssertionMacros).size();
  }
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    UnitTestFn fn;
    fn.name = tpl.name_prefix + "_fuzzaug_" + std::to_string(i + 1);
    fn.text = RenderTest(tpl, fn.name,
                         RenderLiteral(tpl.param_type, seeds[i].bytes));
    fn.assertion_count = assertions;
    out.push_back(std::move(fn));
  }
  return out;
}

std::string RenderTestFile(const TestTemplate& tpl,
                           const std::vector<UnitTestFn>& tests) {
  std::string out = tpl.preamble;
  for (const UnitTestFn& fn : tests) {
    out += "\n";
    out += fn.text;
    out += "\n";
  }
  return out;
}

std::optional<FocalFn> ResolveTargetFocal(const FuzzTargetUnit& t,
                                          const FocalIndex& index) {
  std::string block = "{\n";
  for (const std::string& stmt : t.body) block += stmt + "\n";
  block += "}";
  auto ts = TokenStream::TryParse(block);
  if (!ts) return std::nullopt;
  std::vector<rust::CallSite> calls = rust::CollectCalls(*ts, 0, ts->size() - 1);
  std::sort(calls.begin(), calls.end(),
            [](const rust::CallSite& a, const rust::CallSite& b) {
              return a.name_token < b.name_token;
            });
  std::vector<std::string> imports;
  if (auto src = TokenStream::TryParse(t.source)) {
    for (rust::UseItem& u : rust::ScanItems(*src).uses) {
      imports.push_back(std::move(u.text));
    }
  }
  for (auto it = calls.rbegin(); it != calls.rend(); ++it) {
    if (auto focal = index.Resolve(*it, imports, t.file)) return focal;
  }
  return std::nullopt;
}

std::vector<FocalTestPair> PairAugmented(const std::vector<UnitTestFn>& tests,
                                         const FuzzTargetUnit& t,
                                         const Workspace& ws,
                                         std::vector<std::string>* diagnostics) {
  std::vector<FocalTestPair> out;
  const FocalIndex index(ws);
  const std::optional<FocalFn> focal = ResolveTargetFocal(t, index);
  if (!focal) {
    if (diagnostics != nullptr) {
      diagnostics->push_back(t.id + ": no crate function called; " +
                             std::to_string(tests.size()) +
                             " tests left unpaired");
    }
    return out;
  }
  for (const UnitTestFn& test : tests) {
    UnitTestFn copy = test;
    if (copy.file.empty()) copy.file = t.file;
    out.push_back({*focal, std::move(copy), Origin::kAugmented,
                   ws.package_name});
  }
  return out;
}

CompileCheck CheckTestsCompile(
    const Workspace& ws,
    const std::vector<std::pair<std::string, std::string>>& files,
    const CompileOptions& opts) {
  fs::path work = opts.work_dir;
  bool temp = false;
  if (work.empty()) {
    std::random_device rd;
    work = fs::temp_directory_path() /
           ("testaug-compile-" + std::to_string(::getpid()) + "-" +
            std::to_string(rd()));
    temp = true;
  }
  const fs::path root = work / ws.package_name;
  CopyWorkspaceTree(ws.root_path, root);
  for (const auto& [name, text] : files) {
    WriteFileAtomic(root / "tests" / (name + ".rs"), text);
  }
  ProcessSpec spec;
  spec.argv = {"cargo", "test", "--no-run", "--tests"};
  if (opts.target_dir) {
    spec.argv.push_back("--target-dir");
    spec.argv.push_back(opts.target_dir->string());
  }
  spec.cwd = root;
  spec.timeout = opts.timeout;
  const ProcessResult r = RunProcess(spec);
  CompileCheck check;
  check.ok = r.ok();
  check.log = r.err;
  if (temp) {
    std::error_code ec;
    fs::remove_all(work, ec);
  }
  return check;
}

}  // namespace testaug
