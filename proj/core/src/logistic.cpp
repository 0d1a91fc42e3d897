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

#include <cmath>

#include "inferopt/error.hpp"
#include "inferopt/model.hpp"
#include "bytes.hpp"

namespace inferopt {

namespace {

constexpr double kLearningRate = 0.1;
constexpr int kIterations = 500;
constexpr double kL2 = 1e-4;

struct LogisticModel {
  std::vector<double> weights;  // per standardized column
  double bias = 0.0;
  std::vector<double> mean;
  std::vector<double> scale;
};

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void check_binary_labels(const std::vector<double>& y) {
  for (double v : y) {
    if (v != 0.0 && v != 1.0) {
      throw ValidationError("labels must be binary 0/1 for classification built-ins");
    }
  }
}

const LogisticModel& payload(const TrainedModel& m) {
  return *static_cast<const LogisticModel*>(m.payload.get());
}

std::vector<double> probabilities(const TrainedModel& m, const Matrix& x) {
  const LogisticModel& lm = payload(m);
  if (x.cols != lm.weights.size()) {
    throw ValidationError("feature matrix has " + std::to_string(x.cols) +
                          " columns, model expects " + std::to_string(lm.weights.size()));
  }
  std::vector<double> probs(x.rows);
  for (size_t r = 0; r < x.rows; ++r) {
    double z = lm.bias;
    const double* row = x.row(r);
    for (size_t c = 0; c < x.cols; ++c) {
      z += lm.weights[c] * ((row[c] - lm.mean[c]) / lm.scale[c]);
    }
    probs[r] = sigmoid(z);
  }
  return probs;
}

TrainedModel train_logistic(const Matrix& x, const std::vector<double>& y) {
  if (x.cols == 0) throw ValidationError("empty feature matrix");
  if (x.rows == 0 || x.rows != y.size()) throw ValidationError("feature matrix / label size mismatch");
  check_binary_labels(y);

  auto model = std::make_shared<LogisticModel>();
  const size_t n = x.rows;
  const size_t d = x.cols;

  model->mean.assign(d, 0.0);
  model->scale.assign(d, 1.0);
  for (size_t c = 0; c < d; ++c) {
    double sum = 0.0;
    for (size_t r = 0; r < n; ++r) sum += x.at(r, c);
    model->mean[c] = sum / static_cast<double>(n);
    double var = 0.0;
    for (size_t r = 0; r < n; ++r) {
      const double dv = x.at(r, c) - model->mean[c];
      var += dv * dv;
    }
    const double sd = std::sqrt(var / static_cast<double>(n));
    model->scale[c] = sd > 0.0 ? sd : 1.0;
  }

  // Standardized copy once; GD iterates over it.
  Matrix z(n, d);
  for (size_t r = 0; r < n; ++r) {
    for (size_t c = 0; c < d; ++c) z.at(r, c) = (x.at(r, c) - model->mean[c]) / model->scale[c];
  }

  model->weights.assign(d, 0.0);
  model->bias = 0.0;
  std::vector<double> grad(d);
  for (int iter = 0; iter < kIterations; ++iter) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_bias = 0.0;
    for (size_t r = 0; r < n; ++r) {
      double zz = model->bias;
      const double* row = z.row(r);
      for (size_t c = 0; c < d; ++c) zz += model->weights[c] * row[c];
      const double err = sigmoid(zz) - y[r];
      for (size_t c = 0; c < d; ++c) grad[c] += err * row[c];
      grad_bias += err;
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    for (size_t c = 0; c < d; ++c) {
      model->weights[c] -= kLearningRate * (grad[c] * inv_n + kL2 * model->weights[c]);
    }
    model->bias -= kLearningRate * grad_bias * inv_n;
  }

  TrainedModel out;
  out.payload = std::move(model);
  return out;
}

}  // namespace

ModelBundle builtin_logistic_regression() {
  ModelBundle b;
  b.task = TaskKind::Classification;
  b.name = "logistic";
  b.train = train_logistic;
  b.predict = [](const TrainedModel& m, const Matrix& x) {
    std::vector<double> p = probabilities(m, x);
    for (double& v : p) v = v >= 0.5 ? 1.0 : 0.0;
    return p;
  };
  b.confidence = [](const TrainedModel& m, const Matrix& x) {
    std::vector<double> p = probabilities(m, x);
    for (double& v : p) v = v >= 0.5 ? v : 1.0 - v;
    return p;
  };
  b.rank_scores = probabilities;
  b.score = [](const std::vector<double>& pred, const std::vector<double>& truth) {
    if (pred.size() != truth.size() || pred.empty()) {
      throw ValidationError("score: prediction / label size mismatch");
    }
    size_t correct = 0;
    for (size_t i = 0; i < pred.size(); ++i) {
      if (pred[i] == truth[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(pred.size());
  };
  b.serialize = [](const TrainedModel& m) {
    const LogisticModel& lm = payload(m);
    detail::ByteWriter w;
    w.f64s(lm.weights);
    w.f64(lm.bias);
    w.f64s(lm.mean);
    w.f64s(lm.scale);
    return w.take();
  };
  b.deserialize = [](const std::vector<uint8_t>& bytes, std::vector<std::string> cols) {
    detail::ByteReader r(bytes);
    auto lm = std::make_shared<LogisticModel>();
    lm->weights = r.f64s();
    lm->bias = r.f64();
    lm->mean = r.f64s();
    lm->scale = r.f64s();
    r.expect_end();
    if (lm->weights.size() != cols.size()) {
      throw ParseError("logistic payload column count does not match config columns");
    }
    TrainedModel m;
    m.payload = std::move(lm);
    m.feature_columns = std::move(cols);
    return m;
  };
  return b;
}

}  // namespace inferopt
