// Copyright 2026 The inferopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "inferopt/knapsack.hpp"
#include "inferopt/rng.hpp"

namespace {

std::vector<inferopt::FeatureGroup> random_groups(size_t n, uint64_t seed) {
  inferopt::Rng rng(seed);
  std::vector<inferopt::FeatureGroup> groups(n);
  for (size_t i = 0; i < n; ++i) {
    groups[i].id = static_cast<int>(i) + 1;
    groups[i].cost_us = rng.uniform01() * 100.0;
    groups[i].importance = rng.uniform01();
  }
  return groups;
}

void BM_SelectFeatureGroups(benchmark::State& state) {
  const auto groups = random_groups(static_cast<size_t>(state.range(0)), 17);
  double total = 0.0;
  for (const auto& g : groups) total += g.cost_us;
  for (auto _ : state) {
    benchmark::DoNotOptimize(inferopt::select_feature_groups(groups, total * 0.4));
  }
}

}  // namespace

BENCHMARK(BM_SelectFeatureGroups)->Arg(8)->Arg(16)->Arg(24);
