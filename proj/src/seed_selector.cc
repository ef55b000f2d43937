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

#include "testaug/seed_selector.h"

#include <random>
#include <unordered_set>

#include "testaug/error.h"

namespace testaug {
namespace {

struct BytesHash {
  std::size_t operator()(const std::vector<std::uint8_t>* v) const {
    return std::hash<std::string_view>()(std::string_view(
        reinterpret_cast<const char*>(v->data()), v->size()));
  }
};

struct BytesEq {
  bool operator()(const std::vector<std::uint8_t>* a,
                  const std::vector<std::uint8_t>* b) const {
    return *a == *b;
  }
};

}  // namespace

void ValidateSelectionConfig(const SelectionConfig& cfg) {
  if (cfg.n_samples < 1) {
    throw Error(ErrorCode::kInvalidArgument, "n_samples must be at least 1");
  }
  if (cfg.max_len < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_len must be at least 1");
  }
}

Selection SelectSeeds(const std::vector<SeedInput>& inputs,
                      const SelectionConfig& cfg) {
  ValidateSelectionConfig(cfg);
  Selection out;
  std::unordered_set<const std::vector<std::uint8_t>*, BytesHash, BytesEq> seen;
  std::vector<const SeedInput*> eligible;
  for (const SeedInput& in : inputs) {
    if (in.length() >= cfg.max_len) continue;
    if (seen.insert(&in.bytes).second) eligible.push_back(&in);
  }
  out.eligible = eligible.size();

  // Fisher-Yates spelled out so the order is the same on every stdlib.
  std::mt19937_64 rng(cfg.rng_seed);
  for (std::size_t i = eligible.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(eligible[i - 1], eligible[j]);
  }
  const std::size_t take = std::min(cfg.n_samples, eligible.size());
  out.seeds.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.seeds.push_back(*eligible[i]);
  if (take < cfg.n_samples) {
    out.diagnostics.push_back(
        "only " + std::to_string(take) + " of " +
        std::to_string(cfg.n_samples) + " seeds available" +
        (inputs.empty() ? "" : " for " + inputs.front().target_id));
  }
  return out;
}

std::vector<SeedInput> Select(const std::vector<SeedInput>& inputs,
                              const SelectionConfig& cfg) {
  return SelectSeeds(inputs, cfg).seeds;
}

}  // namespace testaug
