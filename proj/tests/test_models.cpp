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

#include "inferopt/model.hpp"

#include <cmath>

#include <doctest.h>

#include "helpers.hpp"
#include "inferopt/error.hpp"
#include "inferopt/rng.hpp"

using namespace inferopt;
using inferopt::testing::separable_dataset;

namespace {

/// label = 1 iff x1 * x2 > 0, continuous inputs.
Dataset xor_dataset(size_t rows, uint64_t seed) {
  Rng rng(seed);
  Dataset d;
  d.row_count = rows;
  std::vector<double> a(rows), b(rows);
  for (size_t i = 0; i < rows; ++i) {
    a[i] = rng.uniform01() * 2.0 - 1.0;
    b[i] = rng.uniform01() * 2.0 - 1.0;
    d.labels.push_back(a[i] * b[i] > 0 ? 1.0 : 0.0);
  }
  d.columns["a"] = std::move(a);
  d.columns["b"] = std::move(b);
  return d;
}

double train_accuracy(const ModelBundle& bundle, const Dataset& d) {
  const TrainedModel m = train_on(bundle, d, d.column_ids());
  const Matrix x = project(d, d.column_ids());
  return bundle.score(bundle.predict(m, x), d.labels);
}

}  // namespace

TEST_SUITE("models") {
  TEST_CASE("logistic fits linearly separable data") {
    const Dataset d = separable_dataset(200, 21);
    CHECK(train_accuracy(builtin_logistic_regression(), d) >= 0.99);
  }

  TEST_CASE("logistic with constant labels predicts that label") {
    Dataset d = separable_dataset(50, 22);
    std::fill(d.labels.begin(), d.labels.end(), 1.0);
    CHECK(train_accuracy(builtin_logistic_regression(), d) == 1.0);
  }

  TEST_CASE("binary confidences live in [0.5, 1.0]") {
    const Dataset d = separable_dataset(300, 23);
    for (const ModelBundle& bundle :
         {builtin_logistic_regression(), builtin_stump_ensemble(10)}) {
      const TrainedModel m = train_on(bundle, d, d.column_ids());
      for (double c : bundle.confidence(m, project(d, d.column_ids()))) {
        CHECK(c >= 0.5);
        CHECK(c <= 1.0);
      }
    }
  }

  TEST_CASE("classification built-ins reject bad inputs") {
    Dataset d = separable_dataset(50, 24);
    const ModelBundle bundle = builtin_logistic_regression();
    SUBCASE("non-binary labels") {
      d.labels[3] = 2.0;
      CHECK_THROWS_WITH_AS(train_on(bundle, d, d.column_ids()), doctest::Contains("binary"),
                           ValidationError);
    }
    SUBCASE("empty feature matrix") {
      CHECK_THROWS_WITH_AS(train_on(bundle, d, {}), doctest::Contains("empty"), ValidationError);
    }
  }

  TEST_CASE("stump ensemble handles the xor pattern") {
    const Dataset d = xor_dataset(400, 31);
    CHECK(train_accuracy(builtin_stump_ensemble(50), d) >= 0.9);
  }

  TEST_CASE("a single round is one stump and beats the majority rate") {
    const Dataset d = xor_dataset(300, 32);
    double majority = 0;
    for (double y : d.labels) majority += y;
    majority = std::max(majority, d.labels.size() - majority) / d.labels.size();
    CHECK(train_accuracy(builtin_stump_ensemble(1), d) >= majority);
  }

  TEST_CASE("stump training is deterministic") {
    const Dataset d = xor_dataset(200, 33);
    const ModelBundle bundle = builtin_stump_ensemble(25);
    const Matrix x = project(d, d.column_ids());
    const TrainedModel m1 = train_on(bundle, d, d.column_ids());
    const TrainedModel m2 = train_on(bundle, d, d.column_ids());
    CHECK(bundle.rank_scores(m1, x) == bundle.rank_scores(m2, x));
  }

  TEST_CASE("score is invariant under joint row permutation") {
    const Dataset d = separable_dataset(200, 34);
    for (const ModelBundle& bundle :
         {builtin_logistic_regression(), builtin_stump_ensemble(15)}) {
      const TrainedModel m = train_on(bundle, d, d.column_ids());
      const Matrix x = project(d, d.column_ids());
      const double base = bundle.score(bundle.predict(m, x), d.labels);

      Rng rng(99);
      const std::vector<size_t> perm = rng.permutation(d.row_count);
      Matrix shuffled(x.rows, x.cols);
      std::vector<double> labels(d.row_count);
      for (size_t r = 0; r < d.row_count; ++r) {
        labels[r] = d.labels[perm[r]];
        for (size_t c = 0; c < x.cols; ++c) shuffled.at(r, c) = x.at(perm[r], c);
      }
      CHECK(bundle.score(bundle.predict(m, shuffled), labels) == base);
    }
  }

  TEST_CASE("linear regression recovers a linear function") {
    Rng rng(41);
    Dataset d;
    d.row_count = 300;
    std::vector<double> a(300), b(300);
    for (size_t i = 0; i < 300; ++i) {
      a[i] = rng.normal();
      b[i] = rng.normal();
      d.labels.push_back(3.0 * a[i] - 2.0 * b[i] + 0.5);
    }
    d.columns["a"] = std::move(a);
    d.columns["b"] = std::move(b);

    const ModelBundle bundle = builtin_linear_regression();
    CHECK(bundle.task == TaskKind::Regression);
    CHECK_FALSE(bundle.confidence);  // no confidence for regression
    const TrainedModel m = train_on(bundle, d, d.column_ids());
    const double score = bundle.score(bundle.predict(m, project(d, d.column_ids())), d.labels);
    CHECK(score >= -1e-6);  // negative RMSE, ~0 on noiseless data
  }

  TEST_CASE("payloads round-trip through serialize/deserialize") {
    const Dataset d = separable_dataset(150, 51);
    const Matrix x = project(d, d.column_ids());
    for (const ModelBundle& bundle : {builtin_logistic_regression(), builtin_stump_ensemble(20),
                                      builtin_linear_regression()}) {
      Dataset data = d;
      if (bundle.task == TaskKind::Regression) {
        for (size_t i = 0; i < data.row_count; ++i) data.labels[i] += 0.25;  // non-binary fine
      }
      const TrainedModel m = train_on(bundle, data, data.column_ids());
      const TrainedModel back = bundle.deserialize(bundle.serialize(m), m.feature_columns);
      CHECK(back.feature_columns == m.feature_columns);
      CHECK(bundle.rank_scores(back, x) == bundle.rank_scores(m, x));
    }
  }

  TEST_CASE("make_bundle resolves name specs") {
    CHECK(make_bundle("logistic").name == "logistic");
    CHECK(make_bundle("stumps:7").name == "stumps:7");
    CHECK(make_bundle("linreg").task == TaskKind::Regression);
    CHECK_THROWS_AS(make_bundle("nope"), ParseError);
    CHECK_THROWS_AS(make_bundle("stumps:0"), ParseError);
  }
}
