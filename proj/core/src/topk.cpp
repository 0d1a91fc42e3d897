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

#include "inferopt/topk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "exec_plan.hpp"
#include "inferopt/knapsack.hpp"
#include "inferopt/rng.hpp"

namespace inferopt {

namespace {

void check_dist(const std::vector<int>& dist, const char* name) {
  if (dist.empty()) throw ValidationError(std::string(name) + " distribution is empty");
  for (int v : dist) {
    if (v < 1) throw ValidationError(std::string(name) + " distribution has values < 1");
  }
}

double mean_of(const std::vector<int>& dist) {
  double sum = 0.0;
  for (int v : dist) sum += static_cast<double>(v);
  return sum / static_cast<double>(dist.size());
}

/// Indices 0..n-1 ordered by (score descending, id ascending), where ids
/// translate positions to tie-breaking keys.
template <typename IdOf>
std::vector<size_t> order_by_score(const std::vector<double>& scores, IdOf id_of) {
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return id_of(a) < id_of(b);
  });
  return order;
}

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

ChooseRResult choose_r(const std::vector<double>& approx_scores,
                       const std::vector<double>& true_scores, const std::vector<int>& k_dist,
                       const std::vector<int>& n_dist, AccuracyMetric /*metric*/, double a_t,
                       const ChooseROptions& opts) {
  if (approx_scores.size() != true_scores.size() || approx_scores.empty()) {
    throw ValidationError("choose_r: approximate / true score size mismatch");
  }
  if (opts.n_trials < 30) throw ValidationError("choose_r requires n_trials >= 30");
  check_dist(k_dist, "K");
  check_dist(n_dist, "N");

  const size_t holdout_n = approx_scores.size();
  const int max_n = *std::max_element(n_dist.begin(), n_dist.end());
  const int min_k = *std::min_element(k_dist.begin(), k_dist.end());
  if (static_cast<size_t>(max_n) > holdout_n) {
    throw ValidationError("holdout (" + std::to_string(holdout_n) +
                          " rows) is smaller than max N (" + std::to_string(max_n) + ")");
  }
  const int r_cap = static_cast<int>((max_n + min_k - 1) / min_k);

  // Per-trial draws are shared across r candidates (common random numbers),
  // which makes per-trial success monotone in r. Success only depends on how
  // many true-top-K members the approximate-order prefix contains, so each
  // trial reduces to the approximate ranks of the true top-K.
  struct Trial {
    size_t k = 0;
    size_t n = 0;
    size_t k_eff = 0;
    std::vector<size_t> truth_positions;  // sorted approximate-order ranks
  };
  std::vector<Trial> trials(static_cast<size_t>(opts.n_trials));
  for (int j = 0; j < opts.n_trials; ++j) {
    Rng rng(mix_seed(opts.seed, static_cast<uint64_t>(j)));
    Trial& t = trials[static_cast<size_t>(j)];
    t.k = static_cast<size_t>(k_dist[rng.below(k_dist.size())]);
    t.n = static_cast<size_t>(n_dist[rng.below(n_dist.size())]);
    const std::vector<size_t> sample = rng.sample_indices(holdout_n, t.n);
    t.k_eff = std::min(t.k, t.n);

    const auto id_of = [&](size_t pos) { return sample[pos]; };
    std::vector<double> approx_sub(t.n), true_sub(t.n);
    for (size_t i = 0; i < t.n; ++i) {
      approx_sub[i] = approx_scores[sample[i]];
      true_sub[i] = true_scores[sample[i]];
    }
    const std::vector<size_t> approx_order = order_by_score(approx_sub, id_of);
    const std::vector<size_t> true_order = order_by_score(true_sub, id_of);

    std::vector<size_t> approx_rank(t.n);
    for (size_t pos = 0; pos < t.n; ++pos) approx_rank[approx_order[pos]] = pos;
    for (size_t i = 0; i < t.k_eff; ++i) {
      t.truth_positions.push_back(approx_rank[true_order[i]]);
    }
    std::sort(t.truth_positions.begin(), t.truth_positions.end());
  }

  ChooseRResult result;
  for (int r = 1; r <= r_cap; ++r) {
    uint64_t successes = 0;
    for (const Trial& t : trials) {
      const size_t cutoff = std::min(static_cast<size_t>(r) * t.k, t.n);
      const size_t overlap = static_cast<size_t>(
          std::upper_bound(t.truth_positions.begin(), t.truth_positions.end(), cutoff - 1) -
          t.truth_positions.begin());
      const double metric_value =
          static_cast<double>(overlap) / static_cast<double>(t.k_eff);
      if (metric_value >= a_t) ++successes;
    }
    result.successes_by_r.push_back(successes);
    if (r < r_cap &&
        wilson_lower_bound(successes, static_cast<uint64_t>(opts.n_trials), opts.interval_z) >
            opts.proportion_bound) {
      result.r = r;
      result.degraded = false;
      return result;
    }
  }
  // Nothing below the cap qualified. At the cap every query ranks the whole
  // sample, so the bound holds trivially; flag it unless the cap is 1 (then
  // exhaustive ranking is what the query distribution asks for anyway).
  result.r = r_cap;
  result.degraded = r_cap > 1;
  return result;
}

TopKConfig train_topk(const TransformationGraph& g, const Dataset& d, const ModelBundle& bundle,
                      const std::vector<int>& k_dist, const std::vector<int>& n_dist,
                      const TopKTrainOptions& opts) {
  if (!bundle.rank_scores) {
    throw ValidationError("top-K optimization requires rank_scores on the model bundle");
  }
  if (g.feature_columns().empty()) throw ValidationError("pipeline produces no feature columns");
  detail::check_columns_match(g, d);
  check_dist(k_dist, "K");
  check_dist(n_dist, "N");

  const double k_bar = mean_of(k_dist);
  const double n_bar = mean_of(n_dist);
  if (k_bar > n_bar) throw ValidationError("mean K exceeds mean N");

  auto [train_split, holdout] = train_holdout_split(d, opts.holdout_fraction, opts.seed);
  const int max_n = *std::max_element(n_dist.begin(), n_dist.end());
  if (static_cast<size_t>(max_n) > holdout.row_count) {
    throw ValidationError("holdout (" + std::to_string(holdout.row_count) +
                          " rows) is smaller than max N (" + std::to_string(max_n) + ")");
  }

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
  const std::vector<double> true_scores = bundle.rank_scores(original, holdout_full);
  const double original_infer_us = measure_inference_us_per_row(bundle, original, holdout_full);

  for (FeatureGroup& fg : groups) {
    fg.importance =
        permutation_importance(fg, bundle, original, holdout, opts.n_shuffles, opts.seed);
  }

  const double feature_cost_f = cost_table.full_cost_us();
  const double cost_f = feature_cost_f + original_infer_us;

  ChooseROptions r_opts;
  r_opts.n_trials = opts.n_trials;
  r_opts.interval_z = opts.interval_z;
  r_opts.proportion_bound = opts.proportion_bound;
  r_opts.seed = opts.seed;

  struct Candidate {
    std::set<int> selected;
    std::vector<std::string> columns;
    TrainedModel model;
    int r = 1;
    bool degraded = false;
    double cost_s = 0.0;
    double p_t = 0.0;
  };
  std::optional<Candidate> best;
  std::set<std::set<int>> tried;

  auto evaluate = [&](std::set<int> selected) {
    const std::vector<std::string> columns = union_columns(groups, selected);
    const TrainedModel approx = train_on(bundle, train_split, columns);
    const Matrix holdout_s = project(holdout, columns);
    const std::vector<double> approx_scores = bundle.rank_scores(approx, holdout_s);

    const ChooseRResult chosen = choose_r(approx_scores, true_scores, k_dist, n_dist,
                                          opts.metric, opts.accuracy_bound, r_opts);
    // The stored r must keep r * mean(K) <= mean(N); execution clamps per
    // query anyway, so a larger r cannot rank more than N rows.
    const int r_limit = std::max(1, static_cast<int>(std::floor(n_bar / k_bar)));
    const int r = std::min(chosen.r, r_limit);

    const double approx_infer_us = measure_inference_us_per_row(bundle, approx, holdout_s);
    const double cost_s = cost_table.cost_of(selected) + approx_infer_us;
    const double p_t = eval_eq2(cost_s, cost_f, n_bar, k_bar, r);

    // Clean candidates always beat degraded ones; otherwise minimize the
    // expected cost, ties toward smaller cost(S), then the earlier budget.
    const bool wins = !best || (best->degraded && !chosen.degraded) ||
                      (best->degraded == chosen.degraded &&
                       (p_t < best->p_t || (p_t == best->p_t && cost_s < best->cost_s)));
    if (wins) {
      best = Candidate{std::move(selected), columns, approx, r, chosen.degraded, cost_s, p_t};
    }
  };

  for (int step = 1; step <= 10; ++step) {
    const double c_max = feature_cost_f * 0.1 * static_cast<double>(step);
    std::set<int> selected = select_feature_groups(groups, c_max);
    if (selected.empty()) continue;
    if (!tried.insert(selected).second) continue;
    evaluate(std::move(selected));
  }
  if (!best) {
    // Degenerate statistics (all importances clamped to zero): fall back to
    // the full feature set so a valid, if unaccelerated, config exists.
    std::set<int> all_ids;
    for (const FeatureGroup& fg : groups) all_ids.insert(fg.id);
    evaluate(std::move(all_ids));
  }

  TopKConfig cfg;
  cfg.selected_groups = best->selected;
  cfg.selected_columns = best->columns;
  cfg.groups = std::move(groups);
  cfg.approximate_model = best->model;
  cfg.original_model = original;
  cfg.bundle_name = bundle.name;
  cfg.r_factor = best->r;
  cfg.degraded = best->degraded;
  cfg.k_dist = k_dist;
  cfg.n_dist = n_dist;
  cfg.k_bar = k_bar;
  cfg.n_bar = n_bar;
  cfg.accuracy_bound = opts.accuracy_bound;
  cfg.metric = opts.metric;
  cfg.cost_s_us = best->cost_s;
  cfg.cost_f_us = cost_f;
  cfg.expected_cost_us = best->p_t;
  return cfg;
}

std::vector<size_t> query_topk(const TopKConfig& cfg, const TransformationGraph& g,
                               const ModelBundle& bundle, FeatureExecutor& executor,
                               std::span<const size_t> rows, int k) {
  if (k < 1) throw ValidationError("k must be >= 1");
  if (rows.empty()) throw ValidationError("query over zero rows");
  const size_t k_eff = std::min(static_cast<size_t>(k), rows.size());

  const std::set<NodeId> selected_nodes = detail::producing_union(cfg.groups, cfg.selected_groups);
  const std::vector<NodeId> plan_s = detail::plan_nodes(g, selected_nodes);
  ColumnBlock block_s;
  detail::run_plan(g, plan_s, executor, rows, block_s);
  const Matrix x_s =
      detail::gather_matrix(block_s, cfg.approximate_model.feature_columns, rows.size());
  const std::vector<double> approx = bundle.rank_scores(cfg.approximate_model, x_s);

  const size_t keep =
      std::min(static_cast<size_t>(cfg.r_factor) * static_cast<size_t>(k), rows.size());
  std::vector<size_t> order =
      order_by_score(approx, [&](size_t pos) { return rows[pos]; });
  order.resize(keep);  // survivor positions within `rows`

  std::vector<size_t> survivor_rows;
  survivor_rows.reserve(keep);
  for (size_t pos : order) survivor_rows.push_back(rows[pos]);

  std::set<NodeId> remaining = detail::all_producing_nodes(cfg.groups);
  for (const NodeId& id : selected_nodes) remaining.erase(id);
  const std::vector<NodeId> plan_rest = detail::plan_nodes(g, remaining);

  ColumnBlock block_full;
  for (const auto& [col, values] : block_s) {
    std::vector<double> sub;
    sub.reserve(keep);
    for (size_t pos : order) sub.push_back(values[pos]);
    block_full[col] = std::move(sub);
  }
  detail::run_plan(g, plan_rest, executor, survivor_rows, block_full);
  const Matrix x_full =
      detail::gather_matrix(block_full, cfg.original_model.feature_columns, keep);
  const std::vector<double> original = bundle.rank_scores(cfg.original_model, x_full);

  std::vector<size_t> final_order =
      order_by_score(original, [&](size_t pos) { return survivor_rows[pos]; });
  final_order.resize(std::min(k_eff, final_order.size()));
  std::vector<size_t> out;
  out.reserve(final_order.size());
  for (size_t pos : final_order) out.push_back(survivor_rows[pos]);
  return out;
}

std::vector<size_t> query_topk_exact(const TrainedModel& original, const TransformationGraph& g,
                                     const ModelBundle& bundle, FeatureExecutor& executor,
                                     std::span<const size_t> rows, int k) {
  if (k < 1) throw ValidationError("k must be >= 1");
  if (rows.empty()) throw ValidationError("query over zero rows");
  const size_t k_eff = std::min(static_cast<size_t>(k), rows.size());

  std::set<NodeId> nodes;
  for (const auto& [col, producer] : g.feature_index()) {
    const std::set<NodeId> anc = ancestors(g, producer);
    nodes.insert(anc.begin(), anc.end());
  }
  const std::vector<NodeId> plan = detail::plan_nodes(g, nodes);
  ColumnBlock block;
  detail::run_plan(g, plan, executor, rows, block);
  const Matrix x = detail::gather_matrix(block, original.feature_columns, rows.size());
  const std::vector<double> scores = bundle.rank_scores(original, x);

  std::vector<size_t> order = order_by_score(scores, [&](size_t pos) { return rows[pos]; });
  order.resize(k_eff);
  std::vector<size_t> out;
  out.reserve(k_eff);
  for (size_t pos : order) out.push_back(rows[pos]);
  return out;
}

}  // namespace inferopt
