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

// Training records: focal text and test text joined by one newline, token
// budgeted, written as JSON lines with a stats sidecar.

#ifndef TESTAUG_DATASET_BUILDER_H_
#define TESTAUG_DATASET_BUILDER_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "testaug/project_model.h"
#include "testaug/test_miner.h"

namespace testaug {

class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  virtual std::string name() const = 0;
  virtual std::size_t Count(std::string_view text) const = 0;
};

// Runs of non-whitespace count one token each, and so does every newline.
// Joining two texts with "\n" therefore costs exactly one token.
class WhitespaceTokenizer : public Tokenizer {
 public:
  std::string name() const override { return "whitespace"; }
  std::size_t Count(std::string_view text) const override;
};

struct DatasetRecord {
  std::string repo_id;
  std::string focal_name;
  std::string text;
  Origin origin = Origin::kMined;
  std::size_t token_count = 0;

  bool operator==(const DatasetRecord&) const = default;
};

struct OriginStats {
  std::size_t n_repos = 0;
  std::size_t n_focal_calls = 0;
  std::size_t n_pairs = 0;
  std::size_t n_tokens = 0;
  std::size_t n_dropped = 0;

  bool operator==(const OriginStats&) const = default;
};

struct CorpusStats {
  OriginStats mined;
  OriginStats augmented;
  // n_repos counts distinct repositories; the other fields are sums.
  OriginStats total;
  std::size_t budget = 512;
  std::string tokenizer;
  std::vector<std::string> warnings;
};

// Focal-call counts reported by the producers of the pairs; when absent the
// number of input pairs of that origin is used.
struct FocalCallCounts {
  std::optional<std::size_t> mined;
  std::optional<std::size_t> augmented;
};

struct BuildResult {
  std::vector<DatasetRecord> records;
  CorpusStats stats;
};

std::string JoinRecordText(const FocalTestPair& pair);

// Without a tokenizer the whitespace fallback is used and the stats carry a
// TokenizerUnavailable warning.
BuildResult Build(const std::vector<FocalTestPair>& pairs, std::size_t budget,
                  const Tokenizer* tokenizer = nullptr,
                  const FocalCallCounts& calls = {});

std::string SerializeRecord(const DatasetRecord& r);
std::string SerializeDataset(const std::vector<DatasetRecord>& records);
std::string SerializeStats(const CorpusStats& stats);

// token_count is recomputed with `tokenizer` (fallback when null). Throws
// Error(kParseError) naming the offending line.
std::vector<DatasetRecord> ParseDataset(std::string_view text,
                                        const Tokenizer* tokenizer = nullptr);

// Writes <out> and <out>.stats.json atomically.
void WriteDataset(const fs::path& out, const BuildResult& result);

// Pair files: one JSON object per line.
std::string SerializePairs(const std::vector<FocalTestPair>& pairs);
std::vector<FocalTestPair> ParsePairs(std::string_view text);
std::vector<FocalTestPair> ReadPairsFile(const fs::path& path);

fs::path StatsSidecarPath(const fs::path& out);

}  // namespace testaug

#endif  // TESTAUG_DATASET_BUILDER_H_
