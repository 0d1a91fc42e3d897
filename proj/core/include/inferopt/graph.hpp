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
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace inferopt {

/// Opaque node identifier, unique within one graph.
using NodeId = std::string;

enum class NodeKind { Input, Transform, Model };

/// Whether a node runs in the compiled engine or in the interpreter.
/// The distinction only matters to the sort pass, which minimizes
/// engine transitions along the execution order.
enum class ExecutionClass { Compilable, Interpreted };

/// Per-node cost declaration: a fixed simulated per-row cost in
/// microseconds, or "measure" (timed empirically on a data sample).
struct CostSpec {
  bool measure = false;
  double fixed_us = 0.0;

  static CostSpec fixed(double us) { return CostSpec{false, us}; }
  static CostSpec measured() { return CostSpec{true, 0.0}; }
};

struct TransformNode {
  NodeId id;
  NodeKind kind = NodeKind::Transform;
  ExecutionClass execution_class = ExecutionClass::Compilable;
  std::vector<NodeId> inputs;                  // ordered upstream dependencies
  std::vector<std::string> output_features;    // feature columns this node produces
  CostSpec cost_spec;
};

/// Validated DAG of feature-computing transformations feeding one model node.
///
/// Invariants (enforced by load_graph / validate):
///   - acyclic; all referenced node ids exist; node ids unique and non-empty
///   - exactly one Model node; it has no downstream consumers
///   - Input nodes have no inputs
///   - every feature column has exactly one producing node
///   - every non-Input node is reachable from an Input node, and the Model
///     node is reachable from every node
///
/// Graphs are immutable after load; all member functions are const and safe
/// to call concurrently.
class TransformationGraph {
 public:
  TransformationGraph(std::map<NodeId, TransformNode> nodes, NodeId model_node);

  const std::map<NodeId, TransformNode>& nodes() const { return nodes_; }
  const TransformNode& node(const NodeId& id) const;
  const NodeId& model_node() const { return model_node_; }

  /// feature column id -> producing node id
  const std::map<std::string, NodeId>& feature_index() const { return feature_index_; }

  /// All feature column ids in canonical (lexicographic) order.
  std::vector<std::string> feature_columns() const;

  /// Direct consumers of a node.
  const std::vector<NodeId>& consumers(const NodeId& id) const;

  bool has_node(const NodeId& id) const { return nodes_.count(id) > 0; }

 private:
  std::map<NodeId, TransformNode> nodes_;
  NodeId model_node_;
  std::map<std::string, NodeId> feature_index_;
  std::map<NodeId, std::vector<NodeId>> consumers_;
};

/// Parses and validates a pipeline spec document (JSON, see README for the
/// schema). Throws ParseError on malformed documents and ValidationError
/// naming the first violated invariant.
TransformationGraph load_graph(const std::string& spec_text);

/// All nodes from which `n` is reachable, including `n` itself.
/// An Input node's ancestor set is just the node itself.
std::set<NodeId> ancestors(const TransformationGraph& g, const NodeId& n);

struct SortResult {
  std::vector<NodeId> order;  // topological order, model node last
  int transitions = 0;        // adjacent pairs with differing execution class
};

/// Topological order chosen to reduce transitions between Compilable and
/// Interpreted nodes: start from the deterministic (lexicographic) Kahn
/// order, then move each Interpreted node to the earliest position its
/// ancestors permit. The result is the better of the hoisted and the plain
/// order, so the transition count never exceeds the plain sort's.
SortResult sort_minimizing_transitions(const TransformationGraph& g);

/// The plain lexicographic Kahn order with its transition count.
SortResult sort_naive(const TransformationGraph& g);

}  // namespace inferopt
