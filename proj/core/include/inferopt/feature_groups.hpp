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

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "inferopt/executor.hpp"
#include "inferopt/graph.hpp"
#include "inferopt/model.hpp"

namespace inferopt {

/// Per-node cost in microseconds per row. Input nodes cost 0; the model
/// node is accounted separately.
using NodeCosts = std::map<NodeId, double>;

/// A computationally independent set of feature columns: the unit of
/// selection for approximate models.
struct FeatureGroup {
  int id = 0;                            // 1-based, ordered by smallest column id
  std::vector<std::string> columns;      // sorted feature column ids
  std::set<NodeId> producing_nodes;      // ancestor closure of the producers
  double cost_us = 0.0;                  // standalone cost: sum over producing_nodes
  double importance = 0.0;               // permutation importance; may be <= 0
};

/// Per-node cost table: fixed-cost nodes return their declared value;
/// "measure" nodes get the median wall-clock time of `repetitions`
/// executions over the sample, divided by the sample row count. Input nodes
/// map to 0. Executor failures propagate with the node id attached.
NodeCosts measure_node_costs(const TransformationGraph& g, const Dataset& sample,
                             FeatureExecutor& executor, int repetitions);

/// Partitions feature columns into groups: two features merge when the cost
/// of their shared dependencies exceeds the cost of each feature's unshared
/// dependencies; the pairwise relation is closed transitively (union-find)
/// into a partition. Features produced by the same node always share a
/// group. Throws ValidationError on a missing node cost.
std::vector<FeatureGroup> identify_feature_groups(const TransformationGraph& g,
                                                  const NodeCosts& node_costs);

/// Cost model over sets of feature groups. cost(S) sums node costs over the
/// union of the groups' producing nodes, so shared dependencies are counted
/// once; cost is monotone and subadditive in S.
class GroupCostTable {
 public:
  GroupCostTable(const std::vector<FeatureGroup>& groups, NodeCosts node_costs);

  /// Standalone cost of one group (its full dependency chain).
  double group_cost(int group_id) const;

  /// Deduplicated cost of a set of groups.
  double cost_of(const std::set<int>& group_ids) const;

  /// cost(F): cost of computing every group (shared nodes counted once).
  double full_cost_us() const { return full_cost_us_; }

 private:
  std::map<int, std::set<NodeId>> group_nodes_;
  std::map<int, double> standalone_;
  NodeCosts node_costs_;
  double full_cost_us_ = 0.0;
};

/// Mean decrease of the holdout score when all of the group's columns are
/// jointly row-permuted (one shared permutation per shuffle). The model must
/// have been trained on a column set containing the group. May be negative.
/// Deterministic given seed; distinct groups derive independent RNG
/// substreams from (seed, group id) and may be evaluated concurrently.
double permutation_importance(const FeatureGroup& group, const ModelBundle& bundle,
                              const TrainedModel& model, const Dataset& holdout,
                              int n_shuffles, uint64_t seed);

}  // namespace inferopt
