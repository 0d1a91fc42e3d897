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
#include <set>
#include <span>
#include <string>
#include <vector>

#include "inferopt/cascade.hpp"
#include "inferopt/executor.hpp"
#include "inferopt/feature_groups.hpp"
#include "inferopt/graph.hpp"
#include "inferopt/model.hpp"
#include "inferopt/stats.hpp"

namespace inferopt {

/// Top-K accuracy relative to the original model's exact top-K. For result
/// sets of the same size the two metrics coincide; both are the overlap
/// fraction |returned intersect exact-top-K| / K.
enum class AccuracyMetric { Precision, Recall };

/// Expected cost of an approximate top-K query:
/// cost_s * n_bar + (cost_f - cost_s) * r * k_bar.
inline double eval_eq2(double cost_s, double cost_f, double n_bar, double k_bar, int r) {
  return cost_s * n_bar + (cost_f - cost_s) * static_cast<double>(r) * k_bar;
}

struct ChooseROptions {
  int n_trials = 100;
  double interval_z = kZ95;        // quantile of the binomial proportion interval
  double proportion_bound = 0.95;  // interval must lie entirely above this
  uint64_t seed = 0;
};

struct ChooseRResult {
  int r = 1;
  bool degraded = false;  // no r below the cap passed the proportion rule
  /// Trial successes for r = 1, 2, ... up to the returned r.
  std::vector<uint64_t> successes_by_r;
};

/// Smallest rank-expansion factor r such that sampled top-K queries filtered
/// to the top r*K by approximate score meet the accuracy bound a_t often
/// enough: over n_trials sampled (K, N) queries, the Wilson score interval
/// of the per-trial success proportion must lie entirely above
/// proportion_bound. r is capped at ceil(max(n_dist) / min(k_dist)); if no
/// smaller r qualifies the cap is returned with the degraded flag (at the
/// cap the query ranks everything, so the bound holds trivially rather than
/// statistically). Trials share their (K, N, sample) draws across r values,
/// making per-trial success monotone in r. Deterministic given the seed.
ChooseRResult choose_r(const std::vector<double>& approx_scores,
                       const std::vector<double>& true_scores, const std::vector<int>& k_dist,
                       const std::vector<int>& n_dist, AccuracyMetric metric, double a_t,
                       const ChooseROptions& opts);

/// A trained approximate top-K configuration. Immutable.
struct TopKConfig {
  std::set<int> selected_groups;              // S
  std::vector<std::string> selected_columns;  // sorted union of S's columns
  std::vector<FeatureGroup> groups;
  TrainedModel approximate_model;
  TrainedModel original_model;
  std::string bundle_name;

  int r_factor = 1;  // r_S; r_factor * mean(k_dist) <= mean(n_dist)
  bool degraded = false;
  std::vector<int> k_dist;  // empirical distribution of K
  std::vector<int> n_dist;  // empirical distribution of N
  double k_bar = 0.0;
  double n_bar = 0.0;
  double accuracy_bound = 0.0;  // a_t
  AccuracyMetric metric = AccuracyMetric::Precision;

  double cost_s_us = 0.0;
  double cost_f_us = 0.0;
  double expected_cost_us = 0.0;  // == eval_eq2(cost_s_us, cost_f_us, n_bar, k_bar, r_factor)
};

struct TopKTrainOptions {
  uint64_t seed = 0;
  double holdout_fraction = 0.25;
  double accuracy_bound = 0.95;
  AccuracyMetric metric = AccuracyMetric::Precision;
  int n_trials = 100;
  double interval_z = kZ95;
  double proportion_bound = 0.95;
  int n_shuffles = 3;
  int cost_repetitions = 3;
  size_t cost_sample_rows = 1000;
  ExecutorFactory executor_factory = simulated_executor_factory();
};

/// Trains the approximate filter: mirrors the cascade loop (knapsack group
/// selection per candidate budget, approximate model of the same class),
/// chooses r per candidate with choose_r, and returns the (S, r) minimizing
/// eval_eq2. Degraded candidates are considered only when no clean candidate
/// exists. The bundle must provide rank_scores.
TopKConfig train_topk(const TransformationGraph& g, const Dataset& d, const ModelBundle& bundle,
                      const std::vector<int>& k_dist, const std::vector<int>& n_dist,
                      const TopKTrainOptions& opts);

/// Approximate top-K query over rows of the executor's backing input:
/// computes the selected groups' features for all rows, keeps the top
/// min(r_factor * k, |rows|) by approximate score, computes the remaining
/// features only for the survivors, and returns the top min(k, |rows|) row
/// ids by original-model score, descending, ties broken by row id.
std::vector<size_t> query_topk(const TopKConfig& cfg, const TransformationGraph& g,
                               const ModelBundle& bundle, FeatureExecutor& executor,
                               std::span<const size_t> rows, int k);

/// Exact top-K: scores every row with the original model. The baseline.
std::vector<size_t> query_topk_exact(const TrainedModel& original, const TransformationGraph& g,
                                     const ModelBundle& bundle, FeatureExecutor& executor,
                                     std::span<const size_t> rows, int k);

}  // namespace inferopt
