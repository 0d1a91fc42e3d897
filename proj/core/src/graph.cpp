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

#include "inferopt/graph.hpp"

#include <algorithm>
#include <deque>

#include <json.hpp>

#include "inferopt/error.hpp"

namespace inferopt {

namespace {

using nlohmann::json;

void check_known_keys(const json& obj, const std::set<std::string>& known,
                      const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (!known.count(key)) {
      throw ParseError("unknown field '" + key + "' in " + where);
    }
  }
}

NodeKind parse_kind(const std::string& s) {
  if (s == "input") return NodeKind::Input;
  if (s == "transform") return NodeKind::Transform;
  if (s == "model") return NodeKind::Model;
  throw ParseError("unknown node kind '" + s + "'");
}

ExecutionClass parse_class(const std::string& s) {
  if (s == "compilable") return ExecutionClass::Compilable;
  if (s == "interpreted") return ExecutionClass::Interpreted;
  throw ParseError("unknown execution_class '" + s + "'");
}

CostSpec parse_cost_spec(const json& j) {
  if (!j.is_object()) throw ParseError("cost_spec must be an object");
  check_known_keys(j, {"fixed_us", "measure"}, "cost_spec");
  if (j.contains("fixed_us") && j.contains("measure")) {
    throw ParseError("cost_spec must have exactly one of fixed_us / measure");
  }
  if (j.contains("fixed_us")) {
    if (!j["fixed_us"].is_number()) throw ParseError("cost_spec.fixed_us must be a number");
    const double us = j["fixed_us"].get<double>();
    if (us < 0.0) throw ParseError("cost_spec.fixed_us must be non-negative");
    return CostSpec::fixed(us);
  }
  if (j.contains("measure")) {
    if (!j["measure"].is_boolean() || !j["measure"].get<bool>()) {
      throw ParseError("cost_spec.measure must be true");
    }
    return CostSpec::measured();
  }
  throw ParseError("cost_spec must have one of fixed_us / measure");
}

// Kahn's algorithm with lexicographic tie-breaking. Returns nodes in order;
// throws ValidationError if a cycle remains.
std::vector<NodeId> kahn_order(const TransformationGraph& g) {
  std::map<NodeId, int> indegree;
  for (const auto& [id, node] : g.nodes()) indegree[id] = static_cast<int>(node.inputs.size());

  std::set<NodeId> ready;  // ordered => lexicographic pop
  for (const auto& [id, deg] : indegree) {
    if (deg == 0) ready.insert(id);
  }

  std::vector<NodeId> order;
  order.reserve(g.nodes().size());
  while (!ready.empty()) {
    const NodeId id = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(id);
    for (const NodeId& next : g.consumers(id)) {
      if (--indegree[next] == 0) ready.insert(next);
    }
  }
  if (order.size() != g.nodes().size()) {
    throw ValidationError("graph contains a cycle");
  }
  return order;
}

int count_transitions(const TransformationGraph& g, const std::vector<NodeId>& order) {
  int transitions = 0;
  for (size_t i = 0; i + 1 < order.size(); ++i) {
    if (g.node(order[i]).execution_class != g.node(order[i + 1]).execution_class) ++transitions;
  }
  return transitions;
}

}  // namespace

TransformationGraph::TransformationGraph(std::map<NodeId, TransformNode> nodes, NodeId model_node)
    : nodes_(std::move(nodes)), model_node_(std::move(model_node)) {
  // Referential checks first: everything else walks edges.
  for (const auto& [id, node] : nodes_) {
    if (id.empty()) throw ValidationError("empty node id");
    if (id != node.id) throw ValidationError("node map key does not match node id '" + node.id + "'");
    for (const NodeId& in : node.inputs) {
      if (!nodes_.count(in)) {
        throw ValidationError("dangling reference: node '" + id + "' depends on unknown node '" +
                              in + "'");
      }
      if (in == id) throw ValidationError("graph contains a cycle: node '" + id + "' depends on itself");
    }
  }

  int model_count = 0;
  for (const auto& [id, node] : nodes_) {
    if (node.kind == NodeKind::Model) ++model_count;
  }
  if (model_count == 0) throw ValidationError("graph has no Model node");
  if (model_count > 1) throw ValidationError("graph has multiple Model nodes");
  if (!nodes_.count(model_node_)) {
    throw ValidationError("model_node '" + model_node_ + "' is not a node in the graph");
  }
  if (nodes_.at(model_node_).kind != NodeKind::Model) {
    throw ValidationError("model_node '" + model_node_ + "' is not of kind model");
  }

  for (const auto& [id, node] : nodes_) {
    if (node.kind == NodeKind::Input && !node.inputs.empty()) {
      throw ValidationError("Input node '" + id + "' has inputs");
    }
  }
  if (!nodes_.at(model_node_).output_features.empty()) {
    throw ValidationError("Model node declares output_features");
  }

  for (const auto& [id, node] : nodes_) {
    consumers_[id];  // ensure entry
    for (const NodeId& in : node.inputs) consumers_[in].push_back(id);
  }
  for (auto& [id, out] : consumers_) std::sort(out.begin(), out.end());

  if (!consumers_.at(model_node_).empty()) {
    throw ValidationError("Model node has consumers");
  }

  for (const auto& [id, node] : nodes_) {
    for (const std::string& feature : node.output_features) {
      if (feature.empty()) throw ValidationError("empty feature column id on node '" + id + "'");
      auto [it, inserted] = feature_index_.emplace(feature, id);
      if (!inserted) {
        throw ValidationError("duplicate feature column '" + feature + "' produced by '" +
                              it->second + "' and '" + id + "'");
      }
    }
  }

  kahn_order(*this);  // cycle check

  // Reachability: forward from Inputs, backward from the Model node.
  std::set<NodeId> from_inputs;
  std::deque<NodeId> queue;
  for (const auto& [id, node] : nodes_) {
    if (node.kind == NodeKind::Input) {
      from_inputs.insert(id);
      queue.push_back(id);
    }
  }
  while (!queue.empty()) {
    const NodeId id = queue.front();
    queue.pop_front();
    for (const NodeId& next : consumers_.at(id)) {
      if (from_inputs.insert(next).second) queue.push_back(next);
    }
  }
  for (const auto& [id, node] : nodes_) {
    if (node.kind != NodeKind::Input && !from_inputs.count(id)) {
      throw ValidationError("node '" + id + "' is not reachable from any Input node");
    }
  }

  std::set<NodeId> reaches_model{model_node_};
  queue.push_back(model_node_);
  while (!queue.empty()) {
    const NodeId id = queue.front();
    queue.pop_front();
    for (const NodeId& in : nodes_.at(id).inputs) {
      if (reaches_model.insert(in).second) queue.push_back(in);
    }
  }
  for (const auto& [id, _] : nodes_) {
    if (!reaches_model.count(id)) {
      throw ValidationError("dead node '" + id + "': the Model node is not reachable from it");
    }
  }
}

const TransformNode& TransformationGraph::node(const NodeId& id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw ValidationError("unknown node id '" + id + "'");
  return it->second;
}

std::vector<std::string> TransformationGraph::feature_columns() const {
  std::vector<std::string> cols;
  cols.reserve(feature_index_.size());
  for (const auto& [col, _] : feature_index_) cols.push_back(col);
  return cols;  // std::map iteration is already lexicographic
}

const std::vector<NodeId>& TransformationGraph::consumers(const NodeId& id) const {
  auto it = consumers_.find(id);
  if (it == consumers_.end()) throw ValidationError("unknown node id '" + id + "'");
  return it->second;
}

TransformationGraph load_graph(const std::string& spec_text) {
  json doc;
  try {
    doc = json::parse(spec_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("pipeline spec must be a JSON object");
  check_known_keys(doc, {"nodes", "model_node"}, "pipeline spec");
  if (!doc.contains("nodes") || !doc["nodes"].is_array()) {
    throw ParseError("pipeline spec requires a 'nodes' array");
  }
  if (!doc.contains("model_node") || !doc["model_node"].is_string()) {
    throw ParseError("pipeline spec requires a 'model_node' string");
  }

  std::map<NodeId, TransformNode> nodes;
  for (const json& jn : doc["nodes"]) {
    if (!jn.is_object()) throw ParseError("each node must be an object");
    check_known_keys(jn, {"id", "kind", "execution_class", "inputs", "output_features", "cost_spec"},
                     "node");
    for (const char* key : {"id", "kind", "execution_class", "inputs", "output_features"}) {
      if (!jn.contains(key)) throw ParseError(std::string("node missing field '") + key + "'");
    }
    TransformNode node;
    if (!jn["id"].is_string()) throw ParseError("node id must be a string");
    node.id = jn["id"].get<std::string>();
    if (node.id.empty()) throw ValidationError("empty node id");
    node.kind = parse_kind(jn["kind"].get<std::string>());
    node.execution_class = parse_class(jn["execution_class"].get<std::string>());
    if (!jn["inputs"].is_array()) throw ParseError("node inputs must be an array");
    for (const json& in : jn["inputs"]) node.inputs.push_back(in.get<std::string>());
    if (!jn["output_features"].is_array()) throw ParseError("output_features must be an array");
    for (const json& f : jn["output_features"]) node.output_features.push_back(f.get<std::string>());
    if (node.kind == NodeKind::Transform) {
      if (!jn.contains("cost_spec")) throw ParseError("transform node '" + node.id + "' missing cost_spec");
      node.cost_spec = parse_cost_spec(jn["cost_spec"]);
    } else if (jn.contains("cost_spec")) {
      throw ParseError("cost_spec is only valid on transform nodes (node '" + node.id + "')");
    }
    if (!nodes.emplace(node.id, node).second) {
      throw ValidationError("duplicate node id '" + node.id + "'");
    }
  }
  return TransformationGraph(std::move(nodes), doc["model_node"].get<std::string>());
}

std::set<NodeId> ancestors(const TransformationGraph& g, const NodeId& n) {
  g.node(n);  // throws on unknown id
  std::set<NodeId> seen{n};
  std::deque<NodeId> queue{n};
  while (!queue.empty()) {
    const NodeId id = queue.front();
    queue.pop_front();
    for (const NodeId& in : g.node(id).inputs) {
      if (seen.insert(in).second) queue.push_back(in);
    }
  }
  return seen;
}

SortResult sort_naive(const TransformationGraph& g) {
  SortResult r;
  r.order = kahn_order(g);
  r.transitions = count_transitions(g, r.order);
  return r;
}

SortResult sort_minimizing_transitions(const TransformationGraph& g) {
  const SortResult naive = sort_naive(g);

  // Hoist pass: scan left to right; each Interpreted node moves to the
  // earliest index where all its ancestors still precede it. Moves only hop
  // over non-ancestors, so the order stays topological. The model node is
  // last in every topological order (it is reachable from every node) and is
  // never moved.
  std::vector<NodeId> order = naive.order;
  std::map<NodeId, std::set<NodeId>> anc;
  for (const NodeId& id : order) anc[id] = ancestors(g, id);

  for (size_t i = 0; i < order.size(); ++i) {
    const NodeId id = order[i];
    if (g.node(id).execution_class != ExecutionClass::Interpreted) continue;
    if (id == g.model_node()) continue;
    const std::set<NodeId>& a = anc[id];
    size_t earliest = 0;
    for (size_t p = 0; p < i; ++p) {
      if (a.count(order[p])) earliest = p + 1;
    }
    if (earliest < i) {
      std::rotate(order.begin() + static_cast<ptrdiff_t>(earliest),
                  order.begin() + static_cast<ptrdiff_t>(i),
                  order.begin() + static_cast<ptrdiff_t>(i) + 1);
    }
  }

  const int hoisted_transitions = count_transitions(g, order);
  if (hoisted_transitions <= naive.transitions) {
    return SortResult{std::move(order), hoisted_transitions};
  }
  return naive;
}

}  // namespace inferopt
