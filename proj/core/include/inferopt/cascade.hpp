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

#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "inferopt/error.hpp"
#include "inferopt/executor.hpp"
#include "inferopt/feature_groups.hpp"
#include "inferopt/graph.hpp"
#include "inferopt/model.hpp"

namespace inferopt {

/// One holdout row's calibration data: approximate prediction s, original
/// prediction f, approximate confidence c, and the true label.
struct CalibrationRecord {
  double approx_prediction = 0.0;
  double original_prediction = 0.0;
  double approx_confidence = 0.0;
  double true_label = 0.0;
};

struct ThresholdResult {
  double threshold = 0.0;   // t; a sentinel below the minimum confidence means
                            // "always use the approximate model"
  double h_fraction = 0.0;  // h_S: fraction of records with confidence > t
  double score = 0.0;       // holdout score of the mixed predictions at t
};

/// Thrown when even the pure original model misses the accuracy target.
class InfeasibleTargetError : public Error {
 public:
  InfeasibleTargetError(double original_score, double a_t)
      : Error("accuracy target " + std::to_string(a_t) +
              " is infeasible: original model scores " + std::to_string(original_score)),
        original_score_(original_score) {}
  double original_score() const { return original_score_; }

 private:
  double original_score_;
};

/// Lowest threshold t such that predicting row i with the approximate
/// prediction when c_i > t (strict) and the original prediction otherwise
/// scores at least a_t. Candidates are the distinct confidences plus a
/// sentinel below the minimum. Throws InfeasibleTargetError when no
/// candidate qualifies.
ThresholdResult cascade_threshold(const std::vector<CalibrationRecord>& records,
                                  const ModelBundle& bundle, double a_t);

/// Expected per-query cost of a cascade: h * cost_s + (1 - h) * cost_f.
inline double eval_eq1(double cost_s, double cost_f, double h_fraction) {
  return h_fraction * cost_s + (1.0 - h_fraction) * cost_f;
}

/// A trained end-to-end cascade. Immutable after construction and shareable
/// across serving threads.
struct CascadeConfig {
  std::set<int> selected_groups;              // S
  std::vector<std::string> selected_columns;  // sorted union of S's columns
  std::vector<FeatureGroup> groups;           // full group table
  TrainedModel approximate_model;             // m
  TrainedModel original_model;
  std::string bundle_name;

  double threshold = 0.0;                // t
  double holdout_approx_fraction = 0.0;  // h_S
  double accuracy_target = 0.0;          // a_t

  // Cost terms include measured model inference time on top of the
  // feature-computation cost; expected_cost_us is exactly
  // eval_eq1(cost_s_us, cost_f_us, holdout_approx_fraction).
  double cost_s_us = 0.0;
  double cost_f_us = 0.0;
  double expected_cost_us = 0.0;  // p_t

  double original_holdout_score = 0.0;
  double cascade_holdout_score = 0.0;
};

/// Optimizer outcome when no configuration beats the full pipeline.
struct NoCascade {
  enum class Reason { InfeasibleEverywhere, NoCostAdvantage };
  Reason reason = Reason::NoCostAdvantage;
  std::string detail;
};

using CascadeOutcome = std::variant<CascadeConfig, NoCascade>;

using ExecutorFactory = std::function<std::unique_ptr<FeatureExecutor>(const Dataset&)>;

/// Returns a factory producing SimulatedExecutor over the given dataset.
ExecutorFactory simulated_executor_factory();

enum class TargetMode {
  DeltaBelowOriginal,  // a_t = original holdout score - value
  Absolute,            // a_t = value
};

struct CascadeTrainOptions {
  uint64_t seed = 0;
  double holdout_fraction = 0.25;
  TargetMode target_mode = TargetMode::DeltaBelowOriginal;
  double target_value = 0.001;
  int n_shuffles = 3;
  int cost_repetitions = 3;
  size_t cost_sample_rows = 1000;
  /// Builds the executor used for empirical node-cost measurement.
  ExecutorFactory executor_factory = simulated_executor_factory();
};

/// Trains an end-to-end cascade: split, identify feature groups, measure
/// per-group cost and importance, then for each candidate budget c_max in
/// {0.1, 0.2, ..., 1.0} x cost(F) select groups by knapsack, train an
/// approximate model of the same class, calibrate the threshold, and keep
/// the candidate minimizing the expected cost. Returns NoCascade when every
/// candidate misses the accuracy target or the best expected cost does not
/// beat cost(F). Ties in expected cost break toward smaller cost(S), then
/// toward the smaller budget. Regression bundles are rejected.
CascadeOutcome train_cascade(const TransformationGraph& g, const Dataset& d,
                             const ModelBundle& bundle, const CascadeTrainOptions& opts);

/// Cascaded inference over rows of the executor's backing input: compute the
/// selected groups' features for all rows, answer with the approximate model
/// where confidence exceeds the threshold, and compute the remaining
/// features only for the rows that fall through to the original model.
/// Reentrant.
std::vector<double> predict_cascaded(const CascadeConfig& cfg, const TransformationGraph& g,
                                     const ModelBundle& bundle, FeatureExecutor& executor,
                                     std::span<const size_t> rows);

/// Full-pipeline inference (every feature node, original model); the
/// baseline that cascades are compared against.
std::vector<double> predict_full(const TrainedModel& original, const TransformationGraph& g,
                                 const ModelBundle& bundle, FeatureExecutor& executor,
                                 std::span<const size_t> rows);

}  // namespace inferopt
