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

#ifndef TESTAUG_SEED_SELECTOR_H_
#define TESTAUG_SEED_SELECTOR_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "testaug/fuzz_orchestrator.h"

namespace testaug {

struct SelectionConfig {
  std::size_t n_samples = 40;  // N
  std::size_t max_len = 64;    // L, exclusive
  std::uint64_t rng_seed = 0;
};

// Throws Error(kInvalidArgument) unless N >= 1 and L >= 1.
void ValidateSelectionConfig(const SelectionConfig& cfg);

struct Selection {
  std::vector<SeedInput> seeds;
  std::size_t eligible = 0;  // distinct inputs shorter than L
  std::vector<std::string> diagnostics;
};

// Drops inputs of length >= L, collapses byte-identical duplicates (first
// occurrence kept), shuffles with a generator seeded by rng_seed and keeps
// the first min(N, eligible).
Selection SelectSeeds(const std::vector<SeedInput>& inputs,
                      const SelectionConfig& cfg);

std::vector<SeedInput> Select(const std::vector<SeedInput>& inputs,
                              const SelectionConfig& cfg);

}  // namespace testaug

#endif  // TESTAUG_SEED_SELECTOR_H_
