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

constexpr double kRidge = 1e-6;

struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;
};

const LinearModel& payload(const TrainedModel& m) {
  return *static_cast<const LinearModel*>(m.payload.get());
}

std::vector<double> predictions(const TrainedModel& m, const Matrix& x) {
  const LinearModel& lm = payload(m);
  if (x.cols != lm.weights.size()) {
    throw ValidationError("feature matrix has " + std::to_string(x.cols) +
                          " columns, model expects " + std::to_string(lm.weights.size()));
  }
  std::vector<double> out(x.rows);
  for (size_t r = 0; r < x.rows; ++r) {
    double v = lm.bias;
    for (size_t c = 0; c < x.cols; ++c) v += lm.weights[c] * x.at(r, c);
    out[r] = v;
  }
  return out;
}

// Solves A w = b in place by Gaussian elimination with partial pivoting.
std::vector<double> solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const size_t n = b.size();
  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    for (size_t r = col + 1; r < n; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    }
    if (a[pivot][col] == 0.0) throw ValidationError("singular normal equations");
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (size_t r = col + 1; r < n; ++r) {
      const double factor = a[r][col] / a[col][col];
      for (size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
      b[r] -= factor * b[col];
    }
  }
  std::vector<double> w(n);
  for (size_t r = n; r-- > 0;) {
    double v = b[r];
    for (size_t c = r + 1; c < n; ++c) v -= a[r][c] * w[c];
    w[r] = v / a[r][r];
  }
  return w;
}

TrainedModel train_linreg(const Matrix& x, const std::vector<double>& y) {
  if (x.cols == 0) throw ValidationError("empty feature matrix");
  if (x.rows == 0 || x.rows != y.size()) throw ValidationError("feature matrix / label size mismatch");

  const size_t d = x.cols + 1;  // bias column last
  std::vector<std::vector<double>> ata(d, std::vector<double>(d, 0.0));
  std::vector<double> atb(d, 0.0);
  for (size_t r = 0; r < x.rows; ++r) {
    for (size_t i = 0; i < d; ++i) {
      const double xi = i < x.cols ? x.at(r, i) : 1.0;
      atb[i] += xi * y[r];
      for (size_t j = i; j < d; ++j) {
        const double xj = j < x.cols ? x.at(r, j) : 1.0;
        ata[i][j] += xi * xj;
      }
    }
  }
  for (size_t i = 0; i < d; ++i) {
    for (size_t j = 0; j < i; ++j) ata[i][j] = ata[j][i];
    if (i < x.cols) ata[i][i] += kRidge;
  }

  std::vector<double> w = solve(std::move(ata), std::move(atb));
  auto lm = std::make_shared<LinearModel>();
  lm->bias = w.back();
  w.pop_back();
  lm->weights = std::move(w);

  TrainedModel out;
  out.payload = std::move(lm);
  return out;
}

}  // namespace

ModelBundle builtin_linear_regression() {
  ModelBundle b;
  b.task = TaskKind::Regression;
  b.name = "linreg";
  b.train = train_linreg;
  b.predict = predictions;
  b.rank_scores = predictions;
  // confidence deliberately left empty: regression bundles have none.
  b.score = [](const std::vector<double>& pred, const std::vector<double>& truth) {
    if (pred.size() != truth.size() || pred.empty()) {
      throw ValidationError("score: prediction / label size mismatch");
    }
    double sq = 0.0;
    for (size_t i = 0; i < pred.size(); ++i) {
      const double e = pred[i] - truth[i];
      sq += e * e;
    }
    return -std::sqrt(sq / static_cast<double>(pred.size()));
  };
  b.serialize = [](const TrainedModel& m) {
    const LinearModel& lm = payload(m);
    detail::ByteWriter w;
    w.f64s(lm.weights);
    w.f64(lm.bias);
    return w.take();
  };
  b.deserialize = [](const std::vector<uint8_t>& bytes, std::vector<std::string> cols) {
    detail::ByteReader r(bytes);
    auto lm = std::make_shared<LinearModel>();
    lm->weights = r.f64s();
    lm->bias = r.f64();
    r.expect_end();
    if (lm->weights.size() != cols.size()) {
      throw ParseError("linreg payload column count does not match config columns");
    }
    TrainedModel m;
    m.payload = std::move(lm);
    m.feature_columns = std::move(cols);
    return m;
  };
  return b;
}

}  // namespace inferopt
