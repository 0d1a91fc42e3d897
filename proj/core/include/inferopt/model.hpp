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
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "inferopt/dataset.hpp"
#include "inferopt/matrix.hpp"

namespace inferopt {

enum class TaskKind { Classification, Regression };

/// Handle to a trained model. The payload is owned by the ModelBundle that
/// produced it; predict/confidence must be called with exactly
/// feature_columns, in order. Immutable after training and safe to share
/// across threads.
struct TrainedModel {
  std::shared_ptr<const void> payload;
  std::vector<std::string> feature_columns;
};

/// Registered train / predict / confidence / score functions behind one
/// uniform interface. Custom models plug in by filling the std::function
/// slots; `confidence` is required for classification bundles and must stay
/// empty for regression. serialize/deserialize round-trip a payload through
/// opaque bytes for config files.
struct ModelBundle {
  TaskKind task = TaskKind::Classification;
  std::string name;  // identity used to rebuild the bundle from a config

  std::function<TrainedModel(const Matrix&, const std::vector<double>&)> train;
  std::function<std::vector<double>(const TrainedModel&, const Matrix&)> predict;
  /// Classification only: per-row confidence in [0, 1] for the returned class.
  std::function<std::vector<double>(const TrainedModel&, const Matrix&)> confidence;
  /// Real-valued ranking score (classification: positive-class probability;
  /// regression: the prediction itself). Used by top-K queries.
  std::function<std::vector<double>(const TrainedModel&, const Matrix&)> rank_scores;
  /// Higher-is-better metric of predictions against labels. Deterministic.
  std::function<double(const std::vector<double>&, const std::vector<double>&)> score;

  std::function<std::vector<uint8_t>(const TrainedModel&)> serialize;
  std::function<TrainedModel(const std::vector<uint8_t>&, std::vector<std::string>)> deserialize;
};

/// Binary logistic regression trained by full-batch gradient descent on
/// logistic loss with L2 penalty (learning rate 0.1, 500 iterations,
/// L2 1e-4, inputs standardized per column). predict thresholds the sigmoid
/// at 0.5; confidence is max(p, 1-p); score is accuracy.
ModelBundle builtin_logistic_regression();

/// Boosted decision stumps on logistic loss (Newton leaf values, shrinkage
/// 0.3). Split candidates include every input column and every pairwise
/// product of input columns, so the ensemble can express interactions.
/// confidence is max(p, 1-p); score is accuracy. Deterministic.
ModelBundle builtin_stump_ensemble(int n_rounds);

/// Ridge linear regression via the normal equations. score is negative
/// RMSE; rank_scores is the prediction. No confidence (regression).
ModelBundle builtin_linear_regression();

/// Trains on the projection of `d` onto `cols` and records the columns on
/// the returned model.
TrainedModel train_on(const ModelBundle& bundle, const Dataset& d,
                      const std::vector<std::string>& cols);

/// Bundle factory from a name spec: "logistic", "stumps:<rounds>", "linreg".
ModelBundle make_bundle(const std::string& spec);

/// Median per-row wall-clock time of bundle.predict on x, in microseconds.
double measure_inference_us_per_row(const ModelBundle& bundle, const TrainedModel& model,
                                    const Matrix& x, int repetitions = 5);

}  // namespace inferopt
