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

#include "inferopt/cascade.hpp"

#include <algorithm>
#include <numeric>

#include "exec_plan.hpp"
#include "inferopt/knapsack.hpp"

namespace inferopt {

namespace {

// A candidate only wins if it undercuts the full pipeline by a real margin;
// guards against timer noise in the measured model-inference terms when the
// approximate model is effectively the original.
constexpr double kNoCascadeMargin = 1e-3;

constexpr int kBudgetSteps = 10;  // c_max grid: {0.1, 0.2, ..., 1.0} * cost(F)

std::vector<std::string> union_columns(const std::vector<FeatureGroup>& groups,
                                       const std::set<int>& selected) {
  std::vector<std::string> cols;
  for (const FeatureGroup& fg : groups) {
    if (selected.count(fg.id)) cols.insert(cols.end(), fg.columns.begin(), fg.columns.end());
  }
  std::sort(cols.begin(), cols.end());
  return cols;
}

}  // namespace

ExecutorFactory simulated_executor_factory() {
  return [](const Dataset& d) { return std::make_unique<SimulatedExecutor>(d); };
}

ThresholdResult cascade_threshold(const std::vector<CalibrationRecord>& records,
                                  const ModelBundle& bundle, double a_t) {
  if (records.empty()) throw ValidationError("cascade_threshold requires records");

  std::vector<double> labels;
  labels.reserve(records.size());
  for (const CalibrationRecord& r : records) labels.push_back(r.true_label);

  // Candidate thresholds: a sentinel below the minimum confidence (meaning
  // "always approximate") plus every distinct confidence, ascending. The
  // largest confidence candidate is the pure-original mixture, since the
  // comparison is strict.
  std::vector<double> candidates;
  candidates.reserve(records.size() + 1);
  for (const CalibrationRecord& r : records) candidates.push_back(r.approx_confidence);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  candidates.insert(candidates.begin(), candidates.front() - 1.0);

  std::vector<double> mixed(records.size());
  for (double t : candidates) {
    size_t approx_count = 0;
    for (size_t i = 0; i < records.size(); ++i) {
      if (records[i].approx_confidence > t) {
        mixed[i] = records[i].approx_prediction;
        ++approx_count;
      } else {
        mixed[i] = records[i].original_prediction;
      }
    }
    const double score = bundle.score(mixed, labels);
    if (score >= a_t) {
      return ThresholdResult{
          t, static_cast<double>(approx_count) / static_cast<double>(records.size()), score};
    }
  }

  // The last candidate was the pure original model.
  std::vector<double> originals;
  originals.reserve(records.size());
  for (const CalibrationRecord& r : records) originals.push_back(r.original_prediction);
  throw InfeasibleTargetError(bundle.score(originals, labels), a_t);
}

CascadeOutcome train_cascade(const TransformationGraph& g, const Dataset& d,
                             const ModelBundle& bundle, const CascadeTrainOptions& opts) {
  if (bundle.task != TaskKind::Classification) {
    throw ValidationError("regression cannot be cascaded");
  }
  if (g.feature_columns().empty()) throw ValidationError("pipeline produces no feature columns");
  detail::check_columns_match(g, d);

  auto [train_split, holdout] = train_holdout_split(d, opts.holdout_fraction, opts.seed);

  // Node costs, measured on a sample of the training split.
  const size_t sample_rows = std::min(opts.cost_sample_rows, train_split.row_count);
  std::vector<size_t> sample_idx(sample_rows);
  std::iota(sample_idx.begin(), sample_idx.end(), size_t{0});
  const Dataset sample = train_split.take_rows(sample_idx);
  std::unique_ptr<FeatureExecutor> cost_executor = opts.executor_factory(sample);
  const NodeCosts node_costs = measure_node_costs(g, sample, *cost_executor, opts.cost_repetitions);

  std::vector<FeatureGroup> groups = identify_feature_groups(g, node_costs);
  const GroupCostTable cost_table(groups, node_costs);

  const std::vector<std::string> all_columns = g.feature_columns();
  const TrainedModel original = train_on(bundle, train_split, all_columns);

  const Matrix holdout_full = project(holdout, all_columns);
  const std::vector<double> original_predictions = bundle.predict(original, holdout_full);
  const double original_score = bundle.score(original_predictions, holdout.labels);
  const double original_infer_us = measure_inference_us_per_row(bundle, original, holdout_full);

  const double a_t = opts.target_mode == TargetMode::Absolute
                         ? opts.target_value
                         : original_score - opts.target_value;

  for (FeatureGroup& fg : groups) {
    fg.importance = permutation_importance(fg, bundle, original, holdout, opts.n_shuffles,
                                           opts.seed);
  }

  const double feature_cost_f = cost_table.full_cost_us();
  const double cost_f = feature_cost_f + original_infer_us;

  struct Candidate {
    std::set<int> selected;
    std::vector<std::string> columns;
    TrainedModel model;
    ThresholdResult threshold;
    double cost_s = 0.0;
    double p_t = 0.0;
  };
  std::optional<Candidate> best;
  std::set<std::set<int>> tried;
  bool any_feasible = false;

  for (int step = 1; step <= kBudgetSteps; ++step) {
    const double c_max = feature_cost_f * 0.1 * static_cast<double>(step);
    std::set<int> selected = select_feature_groups(groups, c_max);
    if (selected.empty()) continue;
    if (!tried.insert(selected).second) continue;

    const std::vector<std::string> columns = union_columns(groups, selected);
    const TrainedModel approx = train_on(bundle, train_split, columns);
    const Matrix holdout_s = project(holdout, columns);
    const std::vector<double> approx_predictions = bundle.predict(approx, holdout_s);
    const std::vector<double> approx_confidence = bundle.confidence(approx, holdout_s);

    std::vector<CalibrationRecord> records(holdout.row_count);
    for (size_t i = 0; i < holdout.row_count; ++i) {
      records[i] = CalibrationRecord{approx_predictions[i], original_predictions[i],
                                     approx_confidence[i], holdout.labels[i]};
    }

    ThresholdResult threshold;
    try {
      threshold = cascade_threshold(records, bundle, a_t);
    } catch (const InfeasibleTargetError&) {
      continue;
    }
    any_feasible = true;

    const double approx_infer_us = measure_inference_us_per_row(bundle, approx, holdout_s);
    const double cost_s = cost_table.cost_of(selected) + approx_infer_us;
    const double p_t = eval_eq1(cost_s, cost_f, threshold.h_fraction);

    const bool wins = !best || p_t < best->p_t ||
                      (p_t == best->p_t && cost_s < best->cost_s);
    if (wins) {
      best = Candidate{std::move(selected), columns, approx, threshold, cost_s, p_t};
    }
  }

  if (!any_feasible) {
    return NoCascade{NoCascade::Reason::InfeasibleEverywhere,
                     "no feature subset meets accuracy target " + std::to_string(a_t) +
                         " (original holdout score " + std::to_string(original_score) + ")"};
  }
  if (!best || best->p_t >= cost_f * (1.0 - kNoCascadeMargin)) {
    return NoCascade{NoCascade::Reason::NoCostAdvantage,
                     "best expected cost " + std::to_string(best->p_t) +
                         " us does not beat the full pipeline (" + std::to_string(cost_f) +
                         " us)"};
  }

  CascadeConfig cfg;
  cfg.selected_groups = best->selected;
  cfg.selected_columns = best->columns;
  cfg.groups = std::move(groups);
  cfg.approximate_model = best->model;
  cfg.original_model = original;
  cfg.bundle_name = bundle.name;
  cfg.threshold = best->threshold.threshold;
  cfg.holdout_approx_fraction = best->threshold.h_fraction;
  cfg.accuracy_target = a_t;
  cfg.cost_s_us = best->cost_s;
  cfg.cost_f_us = cost_f;
  cfg.expected_cost_us = best->p_t;
  cfg.original_holdout_score = original_score;
  cfg.cascade_holdout_score = best->threshold.score;
  return cfg;
}

std::vector<double> predict_cascaded(const CascadeConfig& cfg, const TransformationGraph& g,
                                     const ModelBundle& bundle, FeatureExecutor& executor,
                                     std::span<const size_t> rows) {
  const std::set<NodeId> selected_nodes = detail::producing_union(cfg.groups, cfg.selected_groups);
  const std::vector<NodeId> plan_s = detail::plan_nodes(g, selected_nodes);

  ColumnBlock block_s;
  detail::run_plan(g, plan_s, executor, rows, block_s);
  const Matrix x_s =
      detail::gather_matrix(block_s, cfg.approximate_model.feature_columns, rows.size());

  const std::vector<double> approx_predictions = bundle.predict(cfg.approximate_model, x_s);
  const std::vector<double> confidence = bundle.confidence(cfg.approximate_model, x_s);

  std::vector<double> out(rows.size());
  std::vector<size_t> fallback_positions;
  std::vector<size_t> fallback_rows;
  for (size_t i = 0; i < rows.size(); ++i) {
    if (confidence[i] > cfg.threshold) {
      out[i] = approx_predictions[i];
    } else {
      fallback_positions.push_back(i);
      fallback_rows.push_back(rows[i]);
    }
  }
  if (fallback_positions.empty()) return out;

  std::set<NodeId> remaining = detail::all_producing_nodes(cfg.groups);
  for (const NodeId& id : selected_nodes) remaining.erase(id);
  const std::vector<NodeId> plan_rest = detail::plan_nodes(g, remaining);

  // Reuse the already-computed selected columns for the fallback rows.
  ColumnBlock block_full;
  for (const auto& [col, values] : block_s) {
    std::vector<double> sub;
    sub.reserve(fallback_positions.size());
    for (size_t pos : fallback_positions) sub.push_back(values[pos]);
    block_full[col] = std::move(sub);
  }
  detail::run_plan(g, plan_rest, executor, fallback_rows, block_full);

  const Matrix x_full = detail::gather_matrix(block_full, cfg.original_model.feature_columns,
                                              fallback_rows.size());
  const std::vector<double> full_predictions = bundle.predict(cfg.original_model, x_full);
  for (size_t k = 0; k < fallback_positions.size(); ++k) {
    out[fallback_positions[k]] = full_predictions[k];
  }
  return out;
}

std::vector<double> predict_full(const TrainedModel& original, const TransformationGraph& g,
                                 const ModelBundle& bundle, FeatureExecutor& executor,
                                 std::span<const size_t> rows) {
  // Everything needed to produce every feature column, matching cost(F).
  std::set<NodeId> nodes;
  for (const auto& [col, producer] : g.feature_index()) {
    const std::set<NodeId> anc = ancestors(g, producer);
    nodes.insert(anc.begin(), anc.end());
  }
  const std::vector<NodeId> plan = detail::plan_nodes(g, nodes);
  ColumnBlock block;
  detail::run_plan(g, plan, executor, rows, block);
  const Matrix x = detail::gather_matrix(block, original.feature_columns, rows.size());
  return bundle.predict(original, x);
}

}  // namespace inferopt
