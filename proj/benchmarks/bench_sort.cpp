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

#include <map>

#include "inferopt/graph.hpp"
#include "inferopt/rng.hpp"

namespace {

// Layered random DAG with mixed execution classes.
inferopt::TransformationGraph layered_graph(size_t n, uint64_t seed) {
  using namespace inferopt;
  Rng rng(seed);
  std::map<NodeId, TransformNode> nodes;
  TransformNode input;
  input.id = "n000";
  input.kind = NodeKind::Input;
  nodes.emplace(input.id, input);

  std::vector<NodeId> ids{input.id};
  for (size_t i = 1; i + 1 < n; ++i) {
    TransformNode t;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "n%03zu", i);
    t.id = buf;
    t.kind = NodeKind::Transform;
    t.execution_class =
        rng.below(3) == 0 ? ExecutionClass::Interpreted : ExecutionClass::Compilable;
    t.cost_spec = CostSpec::fixed(1.0);
    t.inputs.push_back(ids[rng.below(ids.size())]);
    t.output_features.push_back("f" + t.id);
    ids.push_back(t.id);
    nodes.emplace(t.id, t);
  }
  TransformNode model;
  model.id = "zmodel";
  model.kind = NodeKind::Model;
  std::map<NodeId, bool> consumed;
  for (const auto& [id, node] : nodes) {
    for (const NodeId& in : node.inputs) consumed[in] = true;
  }
  for (const NodeId& id : ids) {
    if (!consumed.count(id)) model.inputs.push_back(id);
  }
  nodes.emplace(model.id, model);
  return inferopt::TransformationGraph(std::move(nodes), model.id);
}

void BM_SortMinimizingTransitions(benchmark::State& state) {
  const auto g = layered_graph(static_cast<size_t>(state.range(0)), 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(inferopt::sort_minimizing_transitions(g));
  }
}

}  // namespace

BENCHMARK(BM_SortMinimizingTransitions)->Arg(16)->Arg(64)->Arg(256);
