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

#include "inferopt/workload.hpp"

#include <cmath>

#include <json.hpp>

#include "inferopt/error.hpp"
#include "inferopt/rng.hpp"

namespace inferopt {

namespace {

using nlohmann::json;

constexpr double kHardRowDamping = 0.2;

std::string padded(const char* prefix, size_t value) {
  std::string s = std::to_string(value);
  if (s.size() < 2) s.insert(0, 2 - s.size(), '0');
  return prefix + s;
}

}  // namespace

void SyntheticWorkloadSpec::validate() const {
  if (n_rows < 2) throw ValidationError("workload needs at least 2 rows");
  if (groups.empty()) throw ValidationError("workload needs at least one group");
  if (groups.size() > 99) throw ValidationError("workload supports at most 99 groups");
  for (const WorkloadGroupSpec& g : groups) {
    if (g.n_columns < 1 || g.n_columns > 99) {
      throw ValidationError("group n_columns must be in [1, 99]");
    }
    if (g.cost_us < 0.0) throw ValidationError("group cost_us must be non-negative");
    if (g.signal_strength < 0.0 || g.signal_strength > 1.0) {
      throw ValidationError("signal_strength must be in [0, 1]");
    }
  }
  if (easy_fraction < 0.0 || easy_fraction > 1.0) {
    throw ValidationError("easy_fraction must be in [0, 1]");
  }
  if (label_noise < 0.0 || label_noise > 1.0) {
    throw ValidationError("label_noise must be in [0, 1]");
  }
}

SyntheticWorkloadSpec workload_spec_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid workload JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("workload spec must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "n_rows" && key != "groups" && key != "easy_fraction" && key != "label_noise" &&
        key != "seed") {
      throw ParseError("unknown field '" + key + "' in workload spec");
    }
  }
  SyntheticWorkloadSpec spec;
  try {
    spec.n_rows = doc.at("n_rows").get<size_t>();
    spec.easy_fraction = doc.at("easy_fraction").get<double>();
    spec.label_noise = doc.at("label_noise").get<double>();
    spec.seed = doc.at("seed").get<uint64_t>();
    for (const json& jg : doc.at("groups")) {
      for (const auto& [key, _] : jg.items()) {
        if (key != "n_columns" && key != "cost_us" && key != "signal_strength") {
          throw ParseError("unknown field '" + key + "' in workload group");
        }
      }
      WorkloadGroupSpec g;
      g.n_columns = jg.at("n_columns").get<int>();
      g.cost_us = jg.at("cost_us").get<double>();
      g.signal_strength = jg.at("signal_strength").get<double>();
      spec.groups.push_back(g);
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("workload spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

std::pair<TransformationGraph, Dataset> generate_workload(const SyntheticWorkloadSpec& spec) {
  spec.validate();
  const size_t n = spec.n_rows;
  Rng rng(spec.seed);

  // True labels first, then the easy-row mask, then noise draws in
  // (group, column, row) order, then label flips; the draw order is part of
  // the determinism contract.
  std::vector<double> labels(n);
  for (size_t r = 0; r < n; ++r) labels[r] = rng.uniform01() < 0.5 ? 1.0 : 0.0;

  const size_t easy_count =
      static_cast<size_t>(std::llround(spec.easy_fraction * static_cast<double>(n)));
  std::vector<size_t> perm = rng.permutation(n);
  std::vector<bool> easy(n, false);
  for (size_t i = 0; i < easy_count; ++i) easy[perm[i]] = true;

  double cost_sum = 0.0;
  for (const WorkloadGroupSpec& g : spec.groups) cost_sum += g.cost_us;
  const double cost_mean = cost_sum / static_cast<double>(spec.groups.size());

  Dataset d;
  d.row_count = n;
  for (size_t gi = 0; gi < spec.groups.size(); ++gi) {
    const WorkloadGroupSpec& g = spec.groups[gi];
    const bool cheap = g.cost_us < cost_mean;
    for (int c = 0; c < g.n_columns; ++c) {
      std::vector<double> col(n);
      for (size_t r = 0; r < n; ++r) {
        const double s =
            cheap && !easy[r] ? g.signal_strength * kHardRowDamping : g.signal_strength;
        const double direction = labels[r] == 1.0 ? 1.0 : -1.0;
        col[r] = s * direction + (1.0 - s) * rng.normal();
      }
      d.columns.emplace(padded("g", gi) + "_" + padded("c", static_cast<size_t>(c)),
                        std::move(col));
    }
  }

  for (size_t r = 0; r < n; ++r) {
    if (rng.uniform01() < spec.label_noise) labels[r] = 1.0 - labels[r];
  }
  d.labels = std::move(labels);
  d.validate();

  std::map<NodeId, TransformNode> nodes;
  TransformNode input;
  input.id = "input";
  input.kind = NodeKind::Input;
  input.execution_class = ExecutionClass::Compilable;
  nodes.emplace(input.id, input);

  TransformNode model;
  model.id = "model";
  model.kind = NodeKind::Model;
  model.execution_class = ExecutionClass::Compilable;

  for (size_t gi = 0; gi < spec.groups.size(); ++gi) {
    TransformNode node;
    node.id = padded("group", gi);
    node.kind = NodeKind::Transform;
    node.execution_class = ExecutionClass::Compilable;
    node.inputs = {"input"};
    node.cost_spec = CostSpec::fixed(spec.groups[gi].cost_us);
    for (int c = 0; c < spec.groups[gi].n_columns; ++c) {
      node.output_features.push_back(padded("g", gi) + "_" + padded("c", static_cast<size_t>(c)));
    }
    model.inputs.push_back(node.id);
    nodes.emplace(node.id, node);
  }
  nodes.emplace(model.id, model);

  return {TransformationGraph(std::move(nodes), "model"), std::move(d)};
}

}  // namespace inferopt
