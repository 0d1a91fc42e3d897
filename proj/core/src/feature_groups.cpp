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

#include "inferopt/feature_groups.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

#include "inferopt/error.hpp"
#include "inferopt/rng.hpp"

namespace inferopt {

namespace {

double node_cost_or_throw(const NodeCosts& costs, const TransformationGraph& g,
                          const NodeId& id) {
  if (g.node(id).kind == NodeKind::Input) return 0.0;
  auto it = costs.find(id);
  if (it == costs.end()) throw ValidationError("missing node cost for '" + id + "'");
  return it->second;
}

double set_cost(const NodeCosts& costs, const TransformationGraph& g,
                const std::set<NodeId>& nodes) {
  double total = 0.0;
  for (const NodeId& id : nodes) total += node_cost_or_throw(costs, g, id);
  return total;
}

struct UnionFind {
  std::vector<size_t> parent;
  explicit UnionFind(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), size_t{0}); }
  size_t find(size_t a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  }
  void merge(size_t a, size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

NodeCosts measure_node_costs(const TransformationGraph& g, const Dataset& sample,
                             FeatureExecutor& executor, int repetitions) {
  if (repetitions < 1) throw ValidationError("repetitions must be >= 1");
  if (sample.row_count == 0) throw ValidationError("cost sample is empty");

  std::vector<size_t> rows(sample.row_count);
  std::iota(rows.begin(), rows.end(), size_t{0});

  NodeCosts costs;
  for (const auto& [id, node] : g.nodes()) {
    if (node.kind == NodeKind::Model) continue;
    if (node.kind == NodeKind::Input) {
      costs[id] = 0.0;
      continue;
    }
    if (!node.cost_spec.measure) {
      costs[id] = node.cost_spec.fixed_us;
      continue;
    }
    std::vector<double> per_row_us;
    per_row_us.reserve(static_cast<size_t>(repetitions));
    for (int rep = 0; rep < repetitions; ++rep) {
      ColumnBlock block;
      const auto start = std::chrono::steady_clock::now();
      executor.execute(node, rows, block);
      const auto stop = std::chrono::steady_clock::now();
      const double us = std::chrono::duration<double, std::micro>(stop - start).count();
      per_row_us.push_back(us / static_cast<double>(sample.row_count));
    }
    std::sort(per_row_us.begin(), per_row_us.end());
    costs[id] = per_row_us[per_row_us.size() / 2];
  }
  return costs;
}

std::vector<FeatureGroup> identify_feature_groups(const TransformationGraph& g,
                                                  const NodeCosts& node_costs) {
  const std::vector<std::string> columns = g.feature_columns();
  const size_t n = columns.size();

  std::map<NodeId, std::set<NodeId>> producer_ancestors;
  for (const auto& [col, producer] : g.feature_index()) {
    if (!producer_ancestors.count(producer)) {
      producer_ancestors[producer] = ancestors(g, producer);
    }
  }

  // Validate coverage up front so the error does not depend on merge order.
  for (const auto& [id, anc] : producer_ancestors) {
    set_cost(node_costs, g, anc);
  }

  UnionFind uf(n);
  for (size_t i = 0; i < n; ++i) {
    const NodeId& pi = g.feature_index().at(columns[i]);
    const std::set<NodeId>& ai = producer_ancestors.at(pi);
    for (size_t j = i + 1; j < n; ++j) {
      const NodeId& pj = g.feature_index().at(columns[j]);
      if (pi == pj) {  // same producer: computationally identical
        uf.merge(i, j);
        continue;
      }
      const std::set<NodeId>& aj = producer_ancestors.at(pj);
      std::set<NodeId> shared;
      std::set_intersection(ai.begin(), ai.end(), aj.begin(), aj.end(),
                            std::inserter(shared, shared.end()));
      if (shared.empty()) continue;
      std::set<NodeId> only_i;
      std::set_difference(ai.begin(), ai.end(), shared.begin(), shared.end(),
                          std::inserter(only_i, only_i.end()));
      std::set<NodeId> only_j;
      std::set_difference(aj.begin(), aj.end(), shared.begin(), shared.end(),
                          std::inserter(only_j, only_j.end()));
      const double shared_cost = set_cost(node_costs, g, shared);
      const double unshared_i = set_cost(node_costs, g, only_i);
      const double unshared_j = set_cost(node_costs, g, only_j);
      if (shared_cost > unshared_i && shared_cost > unshared_j) uf.merge(i, j);
    }
  }

  std::map<size_t, std::vector<std::string>> members;  // root -> columns
  for (size_t i = 0; i < n; ++i) members[uf.find(i)].push_back(columns[i]);

  std::vector<std::vector<std::string>> column_sets;
  for (auto& [root, cols] : members) {
    std::sort(cols.begin(), cols.end());
    column_sets.push_back(cols);
  }
  std::sort(column_sets.begin(), column_sets.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });

  std::vector<FeatureGroup> groups;
  int next_id = 1;
  for (auto& cols : column_sets) {
    FeatureGroup fg;
    fg.id = next_id++;
    fg.columns = std::move(cols);
    for (const std::string& col : fg.columns) {
      const NodeId& producer = g.feature_index().at(col);
      const std::set<NodeId>& anc = producer_ancestors.at(producer);
      fg.producing_nodes.insert(anc.begin(), anc.end());
    }
    fg.cost_us = set_cost(node_costs, g, fg.producing_nodes);
    groups.push_back(std::move(fg));
  }
  return groups;
}

GroupCostTable::GroupCostTable(const std::vector<FeatureGroup>& groups, NodeCosts node_costs)
    : node_costs_(std::move(node_costs)) {
  std::set<NodeId> all_nodes;
  for (const FeatureGroup& fg : groups) {
    group_nodes_[fg.id] = fg.producing_nodes;
    standalone_[fg.id] = fg.cost_us;
    all_nodes.insert(fg.producing_nodes.begin(), fg.producing_nodes.end());
  }
  for (const NodeId& id : all_nodes) {
    auto it = node_costs_.find(id);
    full_cost_us_ += it == node_costs_.end() ? 0.0 : it->second;
  }
}

double GroupCostTable::group_cost(int group_id) const {
  auto it = standalone_.find(group_id);
  if (it == standalone_.end()) throw ValidationError("unknown group id " + std::to_string(group_id));
  return it->second;
}

double GroupCostTable::cost_of(const std::set<int>& group_ids) const {
  std::set<NodeId> nodes;
  for (int id : group_ids) {
    auto it = group_nodes_.find(id);
    if (it == group_nodes_.end()) throw ValidationError("unknown group id " + std::to_string(id));
    nodes.insert(it->second.begin(), it->second.end());
  }
  double total = 0.0;
  for (const NodeId& id : nodes) {
    auto it = node_costs_.find(id);
    total += it == node_costs_.end() ? 0.0 : it->second;
  }
  return total;
}

double permutation_importance(const FeatureGroup& group, const ModelBundle& bundle,
                              const TrainedModel& model, const Dataset& holdout,
                              int n_shuffles, uint64_t seed) {
  if (n_shuffles < 1) throw ValidationError("n_shuffles must be >= 1");

  std::vector<size_t> positions;
  for (const std::string& col : group.columns) {
    if (!holdout.has_column(col)) {
      throw ValidationError("group column '" + col + "' absent from holdout");
    }
    auto it = std::find(model.feature_columns.begin(), model.feature_columns.end(), col);
    if (it == model.feature_columns.end()) {
      throw ValidationError("group column '" + col + "' not among the model's features");
    }
    positions.push_back(static_cast<size_t>(it - model.feature_columns.begin()));
  }

  const Matrix x = project(holdout, model.feature_columns);
  const double base = bundle.score(bundle.predict(model, x), holdout.labels);

  Rng rng(mix_seed(seed, static_cast<uint64_t>(group.id)));
  double shuffled_sum = 0.0;
  Matrix shuffled = x;
  for (int s = 0; s < n_shuffles; ++s) {
    // One shared permutation applied to every column of the group.
    const std::vector<size_t> perm = rng.permutation(x.rows);
    for (size_t pos : positions) {
      for (size_t r = 0; r < x.rows; ++r) shuffled.at(r, pos) = x.at(perm[r], pos);
    }
    shuffled_sum += bundle.score(bundle.predict(model, shuffled), holdout.labels);
    for (size_t pos : positions) {
      for (size_t r = 0; r < x.rows; ++r) shuffled.at(r, pos) = x.at(r, pos);
    }
  }
  return base - shuffled_sum / static_cast<double>(n_shuffles);
}

}  // namespace inferopt
