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

#include "testaug/dataset_builder.h"

#include <set>

#include "json.hpp"
#include "testaug/error.h"

namespace testaug {
namespace {

using json = nlohmann::ordered_json;

json StatsJson(const OriginStats& s) {
  return json{{"n_repos", s.n_repos},
              {"n_focal_calls", s.n_focal_calls},
              {"n_pairs", s.n_pairs},
              {"n_tokens", s.n_tokens},
              {"n_dropped", s.n_dropped}};
}

template <typename F>
void ForEachLine(std::string_view text, F&& fn) {
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    ++line_no;
    const std::string_view line = text.substr(pos, nl - pos);
    if (!line.empty()) fn(line, line_no);
    pos = nl + 1;
  }
}

std::string RequireString(const json& obj, const char* key,
                          std::size_t line_no) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) +
                                            ": missing string field " + key);
  }
  return it->get<std::string>();
}

Origin RequireOrigin(const json& obj, std::size_t line_no) {
  const auto origin = ParseOrigin(RequireString(obj, "origin", line_no));
  if (!origin) {
    throw Error(ErrorCode::kParseError,
                "line " + std::to_string(line_no) + ": unknown origin");
  }
  return *origin;
}

json ParseLine(std::string_view line, std::size_t line_no) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError,
                "line " + std::to_string(line_no) + ": " + e.what());
  }
  if (!obj.is_object()) {
    throw Error(ErrorCode::kParseError,
                "line " + std::to_string(line_no) + ": not a JSON object");
  }
  return obj;
}

}  // namespace

std::size_t WhitespaceTokenizer::Count(std::string_view text) const {
  std::size_t n = 0;
  bool in_word = false;
  for (char c : text) {
    const bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r' ||
                       c == '\f' || c == '\v';
    if (c == '\n') ++n;
    if (!space && !in_word) ++n;
    in_word = !space;
  }
  return n;
}

std::string JoinRecordText(const FocalTestPair& pair) {
  return pair.focal.text + "\n" + pair.test.text;
}

BuildResult Build(const std::vector<FocalTestPair>& pairs, std::size_t budget,
                  const Tokenizer* tokenizer, const FocalCallCounts& calls) {
  static const WhitespaceTokenizer kFallback;
  BuildResult out;
  out.stats.budget = budget;
  if (tokenizer == nullptr) {
    tokenizer = &kFallback;
    out.stats.warnings.push_back(
        std::string(ErrorCodeName(ErrorCode::kTokenizerUnavailable)) +
        ": no tokenizer configured, counted with the whitespace fallback");
  }
  out.stats.tokenizer = tokenizer->name();

  std::set<std::string> repos[2];
  std::set<std::string> all_repos;
  std::size_t inputs[2] = {0, 0};
  for (const FocalTestPair& p : pairs) {
    const int o = p.origin == Origin::kMined ? 0 : 1;
    OriginStats& s = o == 0 ? out.stats.mined : out.stats.augmented;
    ++inputs[o];
    DatasetRecord r;
    r.repo_id = p.repo_id;
    r.focal_name = p.focal.name;
    r.origin = p.origin;
    r.text = JoinRecordText(p);
    r.token_count = tokenizer->Count(r.text);
    if (r.token_count > budget) {
      ++s.n_dropped;
      continue;
    }
    ++s.n_pairs;
    s.n_tokens += r.token_count;
    repos[o].insert(r.repo_id);
    all_repos.insert(r.repo_id);
    out.records.push_back(std::move(r));
  }
  out.stats.mined.n_repos = repos[0].size();
  out.stats.augmented.n_repos = repos[1].size();
  out.stats.mined.n_focal_calls = calls.mined.value_or(inputs[0]);
  out.stats.augmented.n_focal_calls = calls.augmented.value_or(inputs[1]);

  OriginStats& t = out.stats.total;
  const OriginStats& m = out.stats.mined;
  const OriginStats& a = out.stats.augmented;
  t.n_repos = all_repos.size();
  t.n_focal_calls = m.n_focal_calls + a.n_focal_calls;
  t.n_pairs = m.n_pairs + a.n_pairs;
  t.n_tokens = m.n_tokens + a.n_tokens;
  t.n_dropped = m.n_dropped + a.n_dropped;
  return out;
}

std::string SerializeRecord(const DatasetRecord& r) {
  const json obj{{"repo_id", r.repo_id},
                 {"focal_name", r.focal_name},
                 {"origin", OriginName(r.origin)},
                 {"text", r.text}};
  return obj.dump(-1, ' ', false, json::error_handler_t::replace);
}

std::string SerializeDataset(const std::vector<DatasetRecord>& records) {
  std::string out;
  for (const DatasetRecord& r : records) {
    out += SerializeRecord(r);
    out += '\n';
  }
  return out;
}

std::string SerializeStats(const CorpusStats& stats) {
  json obj{{"budget", stats.budget},
           {"tokenizer", stats.tokenizer},
           {"mined", StatsJson(stats.mined)},
           {"augmented", StatsJson(stats.augmented)},
           {"total", StatsJson(stats.total)},
           {"warnings", stats.warnings}};
  return obj.dump(2) + "\n";
}

std::vector<DatasetRecord> ParseDataset(std::string_view text,
                                        const Tokenizer* tokenizer) {
  static const WhitespaceTokenizer kFallback;
  if (tokenizer == nullptr) tokenizer = &kFallback;
  std::vector<DatasetRecord> out;
  ForEachLine(text, [&](std::string_view line, std::size_t line_no) {
    const json obj = ParseLine(line, line_no);
    DatasetRecord r;
    r.repo_id = RequireString(obj, "repo_id", line_no);
    r.focal_name = RequireString(obj, "focal_name", line_no);
    r.origin = RequireOrigin(obj, line_no);
    r.text = RequireString(obj, "text", line_no);
    r.token_count = tokenizer->Count(r.text);
    out.push_back(std::move(r));
  });
  return out;
}

fs::path StatsSidecarPath(const fs::path& out) {
  return out.string() + ".stats.json";
}

void WriteDataset(const fs::path& out, const BuildResult& result) {
  WriteFileAtomic(out, SerializeDataset(result.records));
  WriteFileAtomic(StatsSidecarPath(out), SerializeStats(result.stats));
}

std::string SerializePairs(const std::vector<FocalTestPair>& pairs) {
  std::string out;
  for (const FocalTestPair& p : pairs) {
    const json obj{
        {"repo_id", p.repo_id},
        {"origin", OriginName(p.origin)},
        {"focal",
         {{"name", p.focal.name},
          {"qualified_path", p.focal.qualified_path},
          {"file", p.focal.file.string()},
          {"begin_line", p.focal.begin_line},
          {"end_line", p.focal.end_line},
          {"text", p.focal.text}}},
        {"test",
         {{"name", p.test.name},
          {"file", p.test.file.string()},
          {"assertion_count", p.test.assertion_count},
          {"text", p.test.text}}}};
    out += obj.dump(-1, ' ', false, json::error_handler_t::replace);
    out += '\n';
  }
  return out;
}

std::vector<FocalTestPair> ParsePairs(std::string_view text) {
  std::vector<FocalTestPair> out;
  ForEachLine(text, [&](std::string_view line, std::size_t line_no) {
    const json obj = ParseLine(line, line_no);
    try {
      FocalTestPair p;
      p.repo_id = RequireString(obj, "repo_id", line_no);
      p.origin = RequireOrigin(obj, line_no);
      const json& f = obj.at("focal");
      p.focal.name = RequireString(f, "name", line_no);
      p.focal.text = RequireString(f, "text", line_no);
      p.focal.file = f.value("file", "");
      p.focal.qualified_path =
          f.value("qualified_path", std::vector<std::string>{});
      p.focal.begin_line = f.value("begin_line", std::size_t{0});
      p.focal.end_line = f.value("end_line", std::size_t{0});
      const json& t = obj.at("test");
      p.test.name = RequireString(t, "name", line_no);
      p.test.text = RequireString(t, "text", line_no);
      p.test.file = t.value("file", "");
      p.test.assertion_count = t.value("assertion_count", std::size_t{0});
      out.push_back(std::move(p));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(line_no) + ": " + e.what());
    }
  });
  return out;
}

std::vector<FocalTestPair> ReadPairsFile(const fs::path& path) {
  return ParsePairs(ReadFileText(path));
}

}  // namespace testaug
