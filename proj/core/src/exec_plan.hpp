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

// Internal helpers shared by the cascade and top-K execution paths.

#pragma once

#include <set>
#include <span>
#include <string>
#include <vector>

#include "inferopt/error.hpp"
#include "inferopt/executor.hpp"
#include "inferopt/feature_groups.hpp"
#include "inferopt/graph.hpp"
#include "inferopt/matrix.hpp"

namespace inferopt::detail {

/// Topologically ordered subset of nodes (plain Kahn order filtered).
inline std::vector<NodeId> plan_nodes(const TransformationGraph& g,
                                      const std::set<NodeId>& include) {
  std::vector<NodeId> plan;
  for (const NodeId& id : sort_naive(g).order) {
    if (include.count(id)) plan.push_back(id);
  }
  return plan;
}

/// Union of producing nodes over the selected groups.
inline std::set<NodeId> producing_union(const std::vector<FeatureGroup>& groups,
                                        const std::set<int>& selected) {
  std::set<NodeId> nodes;
  for (const FeatureGroup& fg : groups) {
    if (selected.count(fg.id)) nodes.insert(fg.producing_nodes.begin(), fg.producing_nodes.end());
  }
  return nodes;
}

inline std::set<NodeId> all_producing_nodes(const std::vector<FeatureGroup>& groups) {
  std::set<NodeId> nodes;
  for (const FeatureGroup& fg : groups) {
    nodes.insert(fg.producing_nodes.begin(), fg.producing_nodes.end());
  }
  return nodes;
}

/// Executes the plan over the rows, collecting feature columns.
inline void run_plan(const TransformationGraph& g, const std::vector<NodeId>& plan,
                     FeatureExecutor& executor, std::span<const size_t> rows, ColumnBlock& out) {
  for (const NodeId& id : plan) executor.execute(g.node(id), rows, out);
}

/// Assembles a matrix from computed columns in the requested order.
inline Matrix gather_matrix(const ColumnBlock& block, const std::vector<std::string>& cols,
                            size_t n_rows) {
  Matrix m(n_rows, cols.size());
  for (size_t c = 0; c < cols.size(); ++c) {
    auto it = block.find(cols[c]);
    if (it == block.end()) {
      throw ValidationError("feature column '" + cols[c] + "' was not computed by the plan");
    }
    if (it->second.size() != n_rows) {
      throw ValidationError("feature column '" + cols[c] + "' has wrong row count");
    }
    for (size_t r = 0; r < n_rows; ++r) m.at(r, c) = it->second[r];
  }
  return m;
}

/// Graph feature columns and dataset columns must agree exactly.
inline void check_columns_match(const TransformationGraph& g, const Dataset& d) {
  const std::vector<std::string> graph_cols = g.feature_columns();
  const std::vector<std::string> data_cols = d.column_ids();
  if (graph_cols == data_cols) return;
  for (const std::string& col : graph_cols) {
    if (!d.has_column(col)) {
      throw ValidationError("dataset is missing feature column '" + col + "'");
    }
  }
  for (const std::string& col : data_cols) {
    if (!g.feature_index().count(col)) {
      throw ValidationError("dataset column '" + col + "' is not produced by the pipeline");
    }
  }
  throw ValidationError("dataset / pipeline feature columns mismatch");
}

}  // namespace inferopt::detail
