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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "inferopt/error.hpp"
#include "inferopt/model.hpp"
#include "bytes.hpp"

namespace inferopt {

namespace {

constexpr double kShrinkage = 0.3;
constexpr double kLambda = 1.0;
constexpr double kMinGain = 1e-12;

// feat < n_raw_columns: split on that column. feat >= n_raw_columns: split on
// the product of a column pair, pairs enumerated (0,1), (0,2), ..., (1,2), ...
// feat == -1: no split, constant stump (left value used).
struct Stump {
  int feat = -1;
  double threshold = 0.0;
  double left = 0.0;   // value <= threshold (already shrunk)
  double right = 0.0;  // value > threshold
};

struct StumpModel {
  double f0 = 0.0;
  uint32_t n_raw = 0;
  std::vector<Stump> stumps;
};

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

std::pair<size_t, size_t> product_pair(size_t pair_index, size_t d) {
  size_t i = 0;
  size_t span = d - 1;
  while (pair_index >= span) {
    pair_index -= span;
    ++i;
    --span;
  }
  return {i, i + 1 + pair_index};
}

double augmented_value(const Matrix& x, size_t row, size_t feat) {
  if (feat < x.cols) return x.at(row, feat);
  auto [i, j] = product_pair(feat - x.cols, x.cols);
  return x.at(row, i) * x.at(row, j);
}

const StumpModel& payload(const TrainedModel& m) {
  return *static_cast<const StumpModel*>(m.payload.get());
}

std::vector<double> raw_scores(const TrainedModel& m, const Matrix& x) {
  const StumpModel& sm = payload(m);
  if (x.cols != sm.n_raw) {
    throw ValidationError("feature matrix has " + std::to_string(x.cols) +
                          " columns, model expects " + std::to_string(sm.n_raw));
  }
  std::vector<double> f(x.rows, sm.f0);
  for (const Stump& s : sm.stumps) {
    if (s.feat < 0) {
      for (size_t r = 0; r < x.rows; ++r) f[r] += s.left;
      continue;
    }
    for (size_t r = 0; r < x.rows; ++r) {
      const double v = augmented_value(x, r, static_cast<size_t>(s.feat));
      f[r] += v <= s.threshold ? s.left : s.right;
    }
  }
  return f;
}

std::vector<double> probabilities(const TrainedModel& m, const Matrix& x) {
  std::vector<double> f = raw_scores(m, x);
  for (double& v : f) v = sigmoid(v);
  return f;
}

TrainedModel train_stumps(const Matrix& x, const std::vector<double>& y, int n_rounds) {
  if (x.cols == 0) throw ValidationError("empty feature matrix");
  if (x.rows == 0 || x.rows != y.size()) throw ValidationError("feature matrix / label size mismatch");
  for (double v : y) {
    if (v != 0.0 && v != 1.0) {
      throw ValidationError("labels must be binary 0/1 for classification built-ins");
    }
  }

  const size_t n = x.rows;
  const size_t d = x.cols;
  const size_t n_feats = d + d * (d - 1) / 2;

  // Materialized augmented matrix plus per-feature sort order, computed once.
  Matrix aug(n, n_feats);
  for (size_t r = 0; r < n; ++r) {
    for (size_t f = 0; f < n_feats; ++f) aug.at(r, f) = augmented_value(x, r, f);
  }
  std::vector<std::vector<uint32_t>> sorted(n_feats);
  for (size_t f = 0; f < n_feats; ++f) {
    sorted[f].resize(n);
    std::iota(sorted[f].begin(), sorted[f].end(), 0u);
    std::sort(sorted[f].begin(), sorted[f].end(), [&](uint32_t a, uint32_t b) {
      const double va = aug.at(a, f);
      const double vb = aug.at(b, f);
      return va < vb || (va == vb && a < b);
    });
  }

  auto model = std::make_shared<StumpModel>();
  model->n_raw = static_cast<uint32_t>(d);
  double p_mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  p_mean = std::clamp(p_mean, 1e-12, 1.0 - 1e-12);
  model->f0 = std::log(p_mean / (1.0 - p_mean));

  std::vector<double> f(n, model->f0);
  for (int round = 0; round < n_rounds; ++round) {
    double g_total = 0.0;
    double h_total = 0.0;
    std::vector<double> g(n), h(n);
    for (size_t r = 0; r < n; ++r) {
      const double p = sigmoid(f[r]);
      g[r] = y[r] - p;
      h[r] = p * (1.0 - p);
      g_total += g[r];
      h_total += h[r];
    }
    const double base_obj = g_total * g_total / (h_total + kLambda);

    double best_gain = 0.0;
    Stump best;  // default: constant stump
    for (size_t feat = 0; feat < n_feats; ++feat) {
      const std::vector<uint32_t>& idx = sorted[feat];
      double gl = 0.0;
      double hl = 0.0;
      for (size_t k = 0; k + 1 < n; ++k) {
        const uint32_t r = idx[k];
        gl += g[r];
        hl += h[r];
        const double v = aug.at(r, feat);
        const double v_next = aug.at(idx[k + 1], feat);
        if (v == v_next) continue;  // split only between distinct values
        const double gr = g_total - gl;
        const double hr = h_total - hl;
        const double gain =
            gl * gl / (hl + kLambda) + gr * gr / (hr + kLambda) - base_obj;
        if (gain > best_gain + kMinGain) {
          best_gain = gain;
          best.feat = static_cast<int>(feat);
          best.threshold = v + (v_next - v) / 2.0;
          best.left = kShrinkage * gl / (hl + kLambda);
          best.right = kShrinkage * gr / (hr + kLambda);
        }
      }
    }
    if (best.feat < 0) {
      best.left = best.right = kShrinkage * g_total / (h_total + kLambda);
    }
    model->stumps.push_back(best);
    for (size_t r = 0; r < n; ++r) {
      if (best.feat < 0) {
        f[r] += best.left;
      } else {
        f[r] += aug.at(r, static_cast<size_t>(best.feat)) <= best.threshold ? best.left
                                                                            : best.right;
      }
    }
  }

  TrainedModel out;
  out.payload = std::move(model);
  return out;
}

}  // namespace

ModelBundle builtin_stump_ensemble(int n_rounds) {
  if (n_rounds < 1) throw ValidationError("n_rounds must be >= 1");
  ModelBundle b;
  b.task = TaskKind::Classification;
  b.name = "stumps:" + std::to_string(n_rounds);
  b.train = [n_rounds](const Matrix& x, const std::vector<double>& y) {
    return train_stumps(x, y, n_rounds);
  };
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
    const StumpModel& sm = payload(m);
    detail::ByteWriter w;
    w.f64(sm.f0);
    w.u32(sm.n_raw);
    w.u32(static_cast<uint32_t>(sm.stumps.size()));
    for (const Stump& s : sm.stumps) {
      w.u32(static_cast<uint32_t>(s.feat + 1));  // 0 encodes "no split"
      w.f64(s.threshold);
      w.f64(s.left);
      w.f64(s.right);
    }
    return w.take();
  };
  b.deserialize = [](const std::vector<uint8_t>& bytes, std::vector<std::string> cols) {
    detail::ByteReader r(bytes);
    auto sm = std::make_shared<StumpModel>();
    sm->f0 = r.f64();
    sm->n_raw = r.u32();
    const uint32_t count = r.u32();
    sm->stumps.reserve(count);
    for (uint32_t i = 0; i < count; ++i) {
      Stump s;
      s.feat = static_cast<int>(r.u32()) - 1;
      s.threshold = r.f64();
      s.left = r.f64();
      s.right = r.f64();
      sm->stumps.push_back(s);
    }
    r.expect_end();
    if (sm->n_raw != cols.size()) {
      throw ParseError("stump payload column count does not match config columns");
    }
    TrainedModel m;
    m.payload = std::move(sm);
    m.feature_columns = std::move(cols);
    return m;
  };
  return b;
}

}  // namespace inferopt
