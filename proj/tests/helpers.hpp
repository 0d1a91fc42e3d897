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

#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "inferopt/dataset.hpp"
#include "inferopt/graph.hpp"
#include "inferopt/rng.hpp"

namespace inferopt::testing {

struct NodeSpec {
  std::string id;
  NodeKind kind = NodeKind::Transform;
  ExecutionClass exec = ExecutionClass::Compilable;
  std::vector<std::string> inputs;
  std::vector<std::string> features;
  double cost_us = 1.0;
};

/// Builds a validated graph from terse node specs; the model node is the
/// unique NodeKind::Model entry.
inline TransformationGraph make_graph(const std::vector<NodeSpec>& specs) {
  std::map<NodeId, TransformNode> nodes;
  NodeId model;
  for (const NodeSpec& s : specs) {
    TransformNode n;
    n.id = s.id;
    n.kind = s.kind;
    n.execution_class = s.exec;
    n.inputs = s.inputs;
    n.output_features = s.features;
    if (s.kind == NodeKind::Transform) n.cost_spec = CostSpec::fixed(s.cost_us);
    if (s.kind == NodeKind::Model) model = s.id;
    nodes.emplace(n.id, n);
  }
  return TransformationGraph(std::move(nodes), model);
}

/// The Fig-3-shaped pipeline: input -> prep(48) -> {f1(1), f2(1)},
/// input -> f3(40), input -> f4(10), model. Groups: {c1,c2}, {c3}, {c4}.
inline TransformationGraph fig3_graph() {
  return make_graph({
      {"input", NodeKind::Input, ExecutionClass::Compilable, {}, {}, 0},
      {"prep", NodeKind::Transform, ExecutionClass::Compilable, {"input"}, {}, 48},
      {"f1", NodeKind::Transform, ExecutionClass::Compilable, {"prep"}, {"c1"}, 1},
      {"f2", NodeKind::Transform, ExecutionClass::Compilable, {"prep"}, {"c2"}, 1},
      {"f3", NodeKind::Transform, ExecutionClass::Compilable, {"input"}, {"c3"}, 40},
      {"f4", NodeKind::Transform, ExecutionClass::Compilable, {"input"}, {"c4"}, 10},
      {"model", NodeKind::Model, ExecutionClass::Compilable, {"f1", "f2", "f3", "f4"}, {}, 0},
  });
}

/// Two-feature dataset with labels from a linear rule (separable when
/// margin > 0).
inline Dataset separable_dataset(size_t rows, uint64_t seed, double margin = 0.5) {
  Rng rng(seed);
  Dataset d;
  d.row_count = rows;
  std::vector<double> a(rows), b(rows);
  for (size_t i = 0; i < rows; ++i) {
    const double label = rng.uniform01() < 0.5 ? 1.0 : 0.0;
    const double direction = label == 1.0 ? 1.0 : -1.0;
    a[i] = direction * (margin + rng.uniform01());
    b[i] = rng.normal() * 0.3;
    d.labels.push_back(label);
  }
  d.columns["a"] = std::move(a);
  d.columns["b"] = std::move(b);
  return d;
}

}  // namespace inferopt::testing
