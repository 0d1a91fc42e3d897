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

// Cascaded vs full inference on a planted workload with microsecond-scale
// simulated node costs.

#include <benchmark/benchmark.h>

#include <numeric>
#include <variant>

#include "inferopt/cascade.hpp"
#include "inferopt/workload.hpp"

namespace {

using namespace inferopt;

struct Setup {
  TransformationGraph graph;
  Dataset data;
  ModelBundle bundle = builtin_logistic_regression();
  CascadeConfig cfg;

  static const Setup& instance() {
    static const Setup setup = [] {
      SyntheticWorkloadSpec spec;
      spec.n_rows = 3000;
      spec.seed = 7;
      spec.easy_fraction = 0.9;
      spec.label_noise = 0.01;
      spec.groups = {{4, 2.0, 0.9}, {4, 18.0, 0.75}};
      auto [graph, data] = generate_workload(spec);
      CascadeTrainOptions opts;
      opts.seed = 42;
      ModelBundle bundle = builtin_logistic_regression();
      CascadeOutcome outcome = train_cascade(graph, data, bundle, opts);
      return Setup{std::move(graph), std::move(data), std::move(bundle),
                   std::get<CascadeConfig>(outcome)};
    }();
    return setup;
  }
};

void BM_PredictCascaded(benchmark::State& state) {
  const Setup& s = Setup::instance();
  SimulatedExecutor executor(s.data);
  std::vector<size_t> rows(static_cast<size_t>(state.range(0)));
  std::iota(rows.begin(), rows.end(), size_t{0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(predict_cascaded(s.cfg, s.graph, s.bundle, executor, rows));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_PredictFull(benchmark::State& state) {
  const Setup& s = Setup::instance();
  SimulatedExecutor executor(s.data);
  std::vector<size_t> rows(static_cast<size_t>(state.range(0)));
  std::iota(rows.begin(), rows.end(), size_t{0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        predict_full(s.cfg.original_model, s.graph, s.bundle, executor, rows));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_PredictCascaded)->Arg(1)->Arg(64)->Arg(512);
BENCHMARK(BM_PredictFull)->Arg(1)->Arg(64)->Arg(512);
