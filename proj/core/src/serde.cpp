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

#include "inferopt/serde.hpp"

#include <algorithm>

#include <json.hpp>

#include "inferopt/base64.hpp"
#include "inferopt/error.hpp"

namespace inferopt {

namespace {

using nlohmann::json;

json model_to_json(const TrainedModel& m, const ModelBundle& bundle) {
  if (!bundle.serialize) {
    throw ValidationError("bundle '" + bundle.name + "' does not support serialization");
  }
  json j;
  j["columns"] = m.feature_columns;
  j["payload"] = base64_encode(bundle.serialize(m));
  return j;
}

TrainedModel model_from_json(const json& j, const ModelBundle& bundle) {
  if (!bundle.deserialize) {
    throw ValidationError("bundle '" + bundle.name + "' does not support deserialization");
  }
  std::vector<std::string> columns = j.at("columns").get<std::vector<std::string>>();
  return bundle.deserialize(base64_decode(j.at("payload").get<std::string>()),
                            std::move(columns));
}

json groups_to_json(const std::vector<FeatureGroup>& groups) {
  json arr = json::array();
  for (const FeatureGroup& fg : groups) {
    json j;
    j["id"] = fg.id;
    j["columns"] = fg.columns;
    j["producing_nodes"] = std::vector<std::string>(fg.producing_nodes.begin(),
                                                    fg.producing_nodes.end());
    j["cost_us"] = fg.cost_us;
    j["importance"] = fg.importance;
    arr.push_back(std::move(j));
  }
  return arr;
}

std::vector<FeatureGroup> groups_from_json(const json& arr) {
  std::vector<FeatureGroup> groups;
  for (const json& j : arr) {
    FeatureGroup fg;
    fg.id = j.at("id").get<int>();
    fg.columns = j.at("columns").get<std::vector<std::string>>();
    for (const std::string& n : j.at("producing_nodes").get<std::vector<std::string>>()) {
      fg.producing_nodes.insert(n);
    }
    fg.cost_us = j.at("cost_us").get<double>();
    fg.importance = j.at("importance").get<double>();
    groups.push_back(std::move(fg));
  }
  return groups;
}

std::vector<std::string> selected_columns_of(const std::vector<FeatureGroup>& groups,
                                             const std::set<int>& selected) {
  std::vector<std::string> cols;
  for (const FeatureGroup& fg : groups) {
    if (selected.count(fg.id)) cols.insert(cols.end(), fg.columns.begin(), fg.columns.end());
  }
  std::sort(cols.begin(), cols.end());
  return cols;
}

json parse_config(const std::string& text, const char* expected_kind) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid config JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("kind")) {
    throw ParseError("config document has no 'kind' field");
  }
  if (doc["kind"].get<std::string>() != expected_kind) {
    throw ParseError("expected a '" + std::string(expected_kind) + "' config, got '" +
                     doc["kind"].get<std::string>() + "'");
  }
  return doc;
}

}  // namespace

std::string cascade_config_to_json(const CascadeConfig& cfg, const ModelBundle& bundle) {
  json doc;
  doc["kind"] = "cascade";
  doc["bundle"] = cfg.bundle_name;
  doc["accuracy_target"] = cfg.accuracy_target;
  doc["threshold"] = cfg.threshold;
  doc["holdout_approx_fraction"] = cfg.holdout_approx_fraction;
  doc["selected_groups"] = std::vector<int>(cfg.selected_groups.begin(),
                                            cfg.selected_groups.end());
  doc["groups"] = groups_to_json(cfg.groups);
  doc["approximate_model"] = model_to_json(cfg.approximate_model, bundle);
  doc["original_model"] = model_to_json(cfg.original_model, bundle);
  doc["scores"] = {{"original_holdout", cfg.original_holdout_score},
                   {"cascade_holdout", cfg.cascade_holdout_score}};
  doc["timing"] = {{"cost_s_us", cfg.cost_s_us},
                   {"cost_f_us", cfg.cost_f_us},
                   {"expected_cost_us", cfg.expected_cost_us}};
  return doc.dump(2) + "\n";
}

CascadeConfig cascade_config_from_json(const std::string& text) {
  const json doc = parse_config(text, "cascade");
  CascadeConfig cfg;
  try {
    cfg.bundle_name = doc.at("bundle").get<std::string>();
    const ModelBundle bundle = make_bundle(cfg.bundle_name);
    cfg.accuracy_target = doc.at("accuracy_target").get<double>();
    cfg.threshold = doc.at("threshold").get<double>();
    cfg.holdout_approx_fraction = doc.at("holdout_approx_fraction").get<double>();
    for (int id : doc.at("selected_groups").get<std::vector<int>>()) {
      cfg.selected_groups.insert(id);
    }
    cfg.groups = groups_from_json(doc.at("groups"));
    cfg.selected_columns = selected_columns_of(cfg.groups, cfg.selected_groups);
    cfg.approximate_model = model_from_json(doc.at("approximate_model"), bundle);
    cfg.original_model = model_from_json(doc.at("original_model"), bundle);
    cfg.original_holdout_score = doc.at("scores").at("original_holdout").get<double>();
    cfg.cascade_holdout_score = doc.at("scores").at("cascade_holdout").get<double>();
    cfg.cost_s_us = doc.at("timing").at("cost_s_us").get<double>();
    cfg.cost_f_us = doc.at("timing").at("cost_f_us").get<double>();
    cfg.expected_cost_us = doc.at("timing").at("expected_cost_us").get<double>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("cascade config: ") + e.what());
  }
  return cfg;
}

std::string topk_config_to_json(const TopKConfig& cfg, const ModelBundle& bundle) {
  json doc;
  doc["kind"] = "topk";
  doc["bundle"] = cfg.bundle_name;
  doc["accuracy_bound"] = cfg.accuracy_bound;
  doc["metric"] = cfg.metric == AccuracyMetric::Precision ? "precision" : "recall";
  doc["r_factor"] = cfg.r_factor;
  doc["degraded"] = cfg.degraded;
  doc["k_dist"] = cfg.k_dist;
  doc["n_dist"] = cfg.n_dist;
  doc["k_bar"] = cfg.k_bar;
  doc["n_bar"] = cfg.n_bar;
  doc["selected_groups"] = std::vector<int>(cfg.selected_groups.begin(),
                                            cfg.selected_groups.end());
  doc["groups"] = groups_to_json(cfg.groups);
  doc["approximate_model"] = model_to_json(cfg.approximate_model, bundle);
  doc["original_model"] = model_to_json(cfg.original_model, bundle);
  doc["timing"] = {{"cost_s_us", cfg.cost_s_us},
                   {"cost_f_us", cfg.cost_f_us},
                   {"expected_cost_us", cfg.expected_cost_us}};
  return doc.dump(2) + "\n";
}

TopKConfig topk_config_from_json(const std::string& text) {
  const json doc = parse_config(text, "topk");
  TopKConfig cfg;
  try {
    cfg.bundle_name = doc.at("bundle").get<std::string>();
    const ModelBundle bundle = make_bundle(cfg.bundle_name);
    cfg.accuracy_bound = doc.at("accuracy_bound").get<double>();
    const std::string metric = doc.at("metric").get<std::string>();
    if (metric != "precision" && metric != "recall") {
      throw ParseError("unknown metric '" + metric + "'");
    }
    cfg.metric = metric == "precision" ? AccuracyMetric::Precision : AccuracyMetric::Recall;
    cfg.r_factor = doc.at("r_factor").get<int>();
    cfg.degraded = doc.at("degraded").get<bool>();
    cfg.k_dist = doc.at("k_dist").get<std::vector<int>>();
    cfg.n_dist = doc.at("n_dist").get<std::vector<int>>();
    cfg.k_bar = doc.at("k_bar").get<double>();
    cfg.n_bar = doc.at("n_bar").get<double>();
    for (int id : doc.at("selected_groups").get<std::vector<int>>()) {
      cfg.selected_groups.insert(id);
    }
    cfg.groups = groups_from_json(doc.at("groups"));
    cfg.selected_columns = selected_columns_of(cfg.groups, cfg.selected_groups);
    cfg.approximate_model = model_from_json(doc.at("approximate_model"), bundle);
    cfg.original_model = model_from_json(doc.at("original_model"), bundle);
    cfg.cost_s_us = doc.at("timing").at("cost_s_us").get<double>();
    cfg.cost_f_us = doc.at("timing").at("cost_f_us").get<double>();
    cfg.expected_cost_us = doc.at("timing").at("expected_cost_us").get<double>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("topk config: ") + e.what());
  }
  return cfg;
}

std::string config_kind(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid config JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("kind")) {
    throw ParseError("config document has no 'kind' field");
  }
  return doc["kind"].get<std::string>();
}

}  // namespace inferopt
