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

#include <gtest/gtest.h>

#include <random>

#include "test_util.h"
#include "testaug/error.h"

namespace testaug {
namespace {

using testing::ReadText;
using testing::TempDir;

FocalTestPair MakePair(std::string repo, std::string focal, std::string test,
                       Origin origin = Origin::kMined) {
  FocalTestPair p;
  p.repo_id = std::move(repo);
  p.focal.name = "f";
  p.focal.text = std::move(focal);
  p.test.name = "t";
  p.test.text = std::move(test);
  p.origin = origin;
  return p;
}

// n whitespace-separated words on one line.
std::string Words(std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s += i == 0 ? "w" : " w";
  return s;
}

std::string RandomText(std::mt19937_64& rng) {
  static const std::vector<std::string> kAlphabet = {
      "a", "b", "z", " ", "{", "}", "(", ")", ";", "\n", "\t", "\"",
      "\\", "/", "'", "\x01", "\x7f", "\u00e9", "\u20ac", "\U0001F600"};
  std::string s;
  const std::size_t n = rng() % 60;
  for (std::size_t i = 0; i < n; ++i) s += kAlphabet[rng() % kAlphabet.size()];
  return s;
}

TEST(WhitespaceTokenizerTest, CountsWordsAndNewlines) {
  const WhitespaceTokenizer tok;
  EXPECT_EQ(tok.Count(""), 0u);
  EXPECT_EQ(tok.Count("   "), 0u);
  EXPECT_EQ(tok.Count("fn f() {}"), 3u);
  EXPECT_EQ(tok.Count("a b\nc"), 4u);
  EXPECT_EQ(tok.Count("\n\n"), 2u);
  EXPECT_EQ(tok.Count("a\n"), 2u);
}

TEST(WhitespaceTokenizerTest, JoinCostsOneToken) {
  const WhitespaceTokenizer tok;
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const std::string a = RandomText(rng);
    const std::string b = RandomText(rng);
    EXPECT_EQ(tok.Count(a + "\n" + b), tok.Count(a) + 1 + tok.Count(b));
  }
}

TEST(BuildTest, JoinsWithExactlyOneNewline) {
  const auto r = Build({MakePair("r", "fn f() {}", "#[test]\nfn t() {}")}, 512);
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.records[0].text, "fn f() {}\n#[test]\nfn t() {}");
}

TEST(BuildTest, DropsOverBudgetAndCounts) {
  // 10 + 1 + 10 = 21 tokens, 300 + 1 + 300 = 601 tokens.
  std::vector<FocalTestPair> pairs = {
      MakePair("a", Words(10), Words(10)),
      MakePair("a", Words(300), Words(300)),
      MakePair("b", Words(255), Words(256), Origin::kAugmented),
      MakePair("c", Words(256), Words(256), Origin::kAugmented),
  };
  const auto r = Build(pairs, 512);
  ASSERT_EQ(r.records.size(), 2u);
  EXPECT_EQ(r.records[0].token_count, 21u);
  EXPECT_EQ(r.records[1].token_count, 512u);
  EXPECT_EQ(r.stats.mined.n_dropped, 1u);
  EXPECT_EQ(r.stats.augmented.n_dropped, 1u);
  EXPECT_EQ(r.stats.total.n_dropped, 2u);
  EXPECT_EQ(r.stats.mined.n_pairs, 1u);
  EXPECT_EQ(r.stats.augmented.n_pairs, 1u);
  EXPECT_EQ(r.stats.total.n_tokens, 533u);
  for (const auto& rec : r.records) EXPECT_LE(rec.token_count, 512u);
}

TEST(BuildTest, TotalsAndRepoUnion) {
  std::vector<FocalTestPair> pairs = {
      MakePair("a", "x", "y"), MakePair("b", "x", "y"),
      MakePair("a", "x", "y", Origin::kAugmented),
      MakePair("c", "x", "y", Origin::kAugmented),
  };
  FocalCallCounts calls;
  calls.mined = 7;
  const auto r = Build(pairs, 512, nullptr, calls);
  EXPECT_EQ(r.stats.mined.n_repos, 2u);
  EXPECT_EQ(r.stats.augmented.n_repos, 2u);
  EXPECT_EQ(r.stats.total.n_repos, 3u);
  EXPECT_EQ(r.stats.mined.n_focal_calls, 7u);
  EXPECT_EQ(r.stats.augmented.n_focal_calls, 2u);
  EXPECT_EQ(r.stats.total.n_focal_calls, 9u);
  EXPECT_EQ(r.stats.total.n_pairs, 4u);
  EXPECT_EQ(r.stats.total.n_tokens,
            r.stats.mined.n_tokens + r.stats.augmented.n_tokens);
}

TEST(BuildTest, FallbackTokenizerIsFlagged) {
  const auto r = Build({}, 512);
  EXPECT_EQ(r.stats.tokenizer, "whitespace");
  ASSERT_EQ(r.stats.warnings.size(), 1u);
  EXPECT_NE(r.stats.warnings[0].find("TokenizerUnavailable"), std::string::npos);
  const WhitespaceTokenizer tok;
  EXPECT_TRUE(Build({}, 512, &tok).stats.warnings.empty());
}

TEST(DatasetFormatTest, RandomRoundTrip) {
  std::mt19937_64 rng(11);
  std::vector<FocalTestPair> pairs;
  for (int i = 0; i < 100; ++i) {
    pairs.push_back(MakePair("repo" + std::to_string(rng() % 5),
                             RandomText(rng), RandomText(rng),
                             rng() % 2 ? Origin::kMined : Origin::kAugmented));
  }
  const auto r = Build(pairs, 1u << 20);
  ASSERT_EQ(r.records.size(), 100u);
  const std::string text = SerializeDataset(r.records);
  std::size_t lines = 0;
  for (char c : text) lines += c == '\n';
  EXPECT_EQ(lines, 100u);
  EXPECT_EQ(ParseDataset(text), r.records);
}

TEST(DatasetFormatTest, FieldOrder) {
  DatasetRecord rec{"r", "f", "a\nb", Origin::kAugmented, 3};
  EXPECT_EQ(SerializeRecord(rec),
            R"({"repo_id":"r","focal_name":"f","origin":"augmented","text":"a\nb"})");
}

TEST(DatasetFormatTest, BadLinesAreParseErrors) {
  for (const char* bad : {"{", "[1]", R"({"repo_id":"r"})",
                          R"({"repo_id":"r","focal_name":"f","origin":"x","text":""})"}) {
    try {
      ParseDataset(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kParseError);
    }
  }
}

TEST(DatasetFormatTest, WritesSidecar) {
  TempDir dir;
  const auto r = Build({MakePair("a", "x", "y")}, 512);
  WriteDataset(dir / "d.jsonl", r);
  EXPECT_EQ(ReadText(dir / "d.jsonl"), SerializeDataset(r.records));
  EXPECT_NE(ReadText(dir / "d.jsonl.stats.json").find("\"n_pairs\": 1"),
            std::string::npos);
}

TEST(PairsFormatTest, RoundTrip) {
  FocalTestPair p = MakePair("b64lite", "fn decode() {}", "#[test]\nfn t() {}");
  p.focal.qualified_path = {"b64lite", "Engine", "decode"};
  p.focal.file = "src/engine.rs";
  p.focal.begin_line = 4;
  p.focal.end_line = 9;
  p.test.file = "tests/t.rs";
  p.test.assertion_count = 2;
  const auto back = ParsePairs(SerializePairs({p, p}));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].focal.qualified_path, p.focal.qualified_path);
  EXPECT_EQ(back[1].focal.file, p.focal.file);
  EXPECT_EQ(back[1].focal.end_line, 9u);
  EXPECT_EQ(back[1].test.assertion_count, 2u);
  EXPECT_EQ(back[1].test.text, p.test.text);
  EXPECT_EQ(back[1].repo_id, "b64lite");
}

}  // namespace
}  // namespace testaug
