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
#include <cmath>
#include <numeric>

#include <doctest.h>

#include "helpers.hpp"
#include "inferopt/rng.hpp"
#include "inferopt/workload.hpp"
#include "oracles.hpp"

using namespace inferopt;
using inferopt::testing::threshold_oracle;

namespace {

std::vector<CalibrationRecord> make_records(
    const std::vector<std::tuple<double, bool, bool>>& rows) {
  // (confidence, approx correct?, original correct?) against label 1/0.
  std::vector<CalibrationRecord> records;
  for (const auto& [conf, approx_ok, orig_ok] : rows) {
    CalibrationRecord r;
    r.true_label = 1.0;
    r.approx_prediction = approx_ok ? 1.0 : 0.0;
    r.original_prediction = orig_ok ? 1.0 : 0.0;
    r.approx_confidence = conf;
    records.push_back(r);
  }
  return records;
}

SyntheticWorkloadSpec planted_spec(size_t rows, uint64_t seed) {
  SyntheticWorkloadSpec spec;
  spec.n_rows = rows;
  spec.seed = seed;
  spec.easy_fraction = 0.9;
  spec.label_noise = 0.01;
  spec.groups = {{4, 10.0, 0.9}, {4, 90.0, 0.75}};
  return spec;
}

}  // namespace

TEST_SUITE("cascade") {
  TEST_CASE("eq1 spot values") {
    CHECK(eval_eq1(10.0, 100.0, 0.8) == doctest::Approx(28.0).epsilon(1e-12));
    CHECK(eval_eq1(10.0, 100.0, 1.0) == 10.0);
    CHECK(eval_eq1(10.0, 100.0, 0.0) == 100.0);
  }

  TEST_CASE("threshold picks the lowest feasible candidate") {
    // Confidences 0.99✓ 0.95✓ 0.90✗ 0.80✓ 0.60✗ with the original always
    // right; at target 0.8 the lowest workable threshold is 0.60 (rows with
    // higher confidence go approximate: 4 rows, 3 right, plus one original).
    const auto records = make_records({{0.99, true, true},
                                       {0.95, true, true},
                                       {0.90, false, true},
                                       {0.80, true, true},
                                       {0.60, false, true}});
    const ModelBundle bundle = builtin_logistic_regression();
    const ThresholdResult r = cascade_threshold(records, bundle, 0.8);
    CHECK(r.threshold == 0.60);
    CHECK(r.h_fraction == 0.8);
    CHECK(r.score == 0.8);
  }

  TEST_CASE("perfect approximation yields the sentinel threshold") {
    const auto records = make_records({{0.9, true, true}, {0.6, true, true}, {0.7, true, true}});
    const ModelBundle bundle = builtin_logistic_regression();
    const ThresholdResult r = cascade_threshold(records, bundle, 1.0);
    CHECK(r.threshold < 0.6);  // below the minimum confidence
    CHECK(r.h_fraction == 1.0);
  }

  TEST_CASE("target zero accepts everything") {
    const auto records = make_records({{0.9, false, false}, {0.6, false, true}});
    const ModelBundle bundle = builtin_logistic_regression();
    const ThresholdResult r = cascade_threshold(records, bundle, 0.0);
    CHECK(r.h_fraction == 1.0);
  }

  TEST_CASE("infeasible target errors with the original score attached") {
    const auto records = make_records({{0.9, false, false}, {0.6, true, true}});
    const ModelBundle bundle = builtin_logistic_regression();
    try {
      cascade_threshold(records, bundle, 0.9);
      FAIL("expected InfeasibleTargetError");
    } catch (const InfeasibleTargetError& e) {
      CHECK(e.original_score() == 0.5);
    }
  }

  TEST_CASE("property: threshold minimality against exhaustive scan") {
    const ModelBundle bundle = builtin_logistic_regression();
    Rng rng(1312);
    for (int trial = 0; trial < 200; ++trial) {
      const size_t n = 1 + rng.below(200);
      std::vector<CalibrationRecord> records(n);
      for (auto& r : records) {
        r.true_label = rng.below(2) ? 1.0 : 0.0;
        r.approx_prediction = rng.uniform01() < 0.8 ? r.true_label : 1.0 - r.true_label;
        r.original_prediction = rng.uniform01() < 0.95 ? r.true_label : 1.0 - r.true_label;
        r.approx_confidence = 0.5 + 0.5 * rng.uniform01();
        if (rng.below(4) == 0) r.approx_confidence = 0.75;  // force ties
      }
      const double a_t = 0.7 + 0.3 * rng.uniform01();
      const auto oracle = threshold_oracle(records, a_t);
      CAPTURE(trial);
      if (!oracle.feasible) {
        CHECK_THROWS_AS(cascade_threshold(records, bundle, a_t), InfeasibleTargetError);
      } else {
        const ThresholdResult got = cascade_threshold(records, bundle, a_t);
        CHECK(got.threshold == oracle.t);
        CHECK(got.h_fraction == oracle.h);
      }
    }
  }

  TEST_CASE("property: raising the target never raises h") {
    Rng rng(1414);
    const ModelBundle bundle = builtin_logistic_regression();
    for (int trial = 0; trial < 50; ++trial) {
      const size_t n = 20 + rng.below(100);
      std::vector<CalibrationRecord> records(n);
      for (auto& r : records) {
        r.true_label = rng.below(2) ? 1.0 : 0.0;
        r.approx_prediction = rng.uniform01() < 0.85 ? r.true_label : 1.0 - r.true_label;
        r.original_prediction = r.true_label;
        r.approx_confidence = 0.5 + 0.5 * rng.uniform01();
      }
      double prev_h = 2.0;
      for (double a_t : {0.5, 0.7, 0.85, 0.95, 1.0}) {
        const ThresholdResult r = cascade_threshold(records, bundle, a_t);
        CHECK(r.h_fraction <= prev_h);
        prev_h = r.h_fraction;
      }
    }
  }

  TEST_CASE("train_cascade on the planted workload finds the cheap group") {
    // Acceptance-scale rows: the 0.001 accuracy delta is a ~2.5-row error
    // budget on the holdout, which is too twitchy below a few thousand rows.
    auto [graph, data] = generate_workload(planted_spec(10000, 7));
    CascadeTrainOptions opts;
    opts.seed = 42;
    const CascadeOutcome outcome =
        train_cascade(graph, data, builtin_logistic_regression(), opts);
    REQUIRE(std::holds_alternative<CascadeConfig>(outcome));
    const CascadeConfig& cfg = std::get<CascadeConfig>(outcome);

    CHECK(cfg.selected_groups == std::set<int>{1});  // the cheap group
    CHECK(cfg.holdout_approx_fraction >= 0.7);
    CHECK(cfg.expected_cost_us <= 0.5 * cfg.cost_f_us);
    CHECK(cfg.cascade_holdout_score >= cfg.accuracy_target);
    // Eq. 1 consistency: stored parts recompute the stored value exactly.
    CHECK(eval_eq1(cfg.cost_s_us, cfg.cost_f_us, cfg.holdout_approx_fraction) ==
          cfg.expected_cost_us);
  }

  TEST_CASE("one indivisible group means NoCascade") {
    SyntheticWorkloadSpec spec;
    spec.n_rows = 1200;
    spec.seed = 5;
    spec.easy_fraction = 1.0;
    spec.label_noise = 0.0;
    spec.groups = {{2, 25.0, 0.8}};
    auto [graph, data] = generate_workload(spec);
    CascadeTrainOptions opts;
    opts.seed = 3;
    const CascadeOutcome outcome =
        train_cascade(graph, data, builtin_logistic_regression(), opts);
    REQUIRE(std::holds_alternative<NoCascade>(outcome));
    CHECK(std::get<NoCascade>(outcome).reason == NoCascade::Reason::NoCostAdvantage);
  }

  TEST_CASE("impossible absolute target means NoCascade everywhere") {
    auto [graph, data] = generate_workload(planted_spec(1500, 9));
    CascadeTrainOptions opts;
    opts.seed = 1;
    opts.target_mode = TargetMode::Absolute;
    opts.target_value = 1.01;
    const CascadeOutcome outcome =
        train_cascade(graph, data, builtin_logistic_regression(), opts);
    REQUIRE(std::holds_alternative<NoCascade>(outcome));
    CHECK(std::get<NoCascade>(outcome).reason == NoCascade::Reason::InfeasibleEverywhere);
  }

  TEST_CASE("regression bundles cannot be cascaded") {
    auto [graph, data] = generate_workload(planted_spec(1000, 2));
    CascadeTrainOptions opts;
    CHECK_THROWS_WITH_AS(train_cascade(graph, data, builtin_linear_regression(), opts),
                         doctest::Contains("regression"), ValidationError);
  }

  TEST_CASE("predict_cascaded degenerate thresholds") {
    auto [graph, data] = generate_workload(planted_spec(2500, 13));
    CascadeTrainOptions opts;
    opts.seed = 8;
    CascadeOutcome outcome = train_cascade(graph, data, builtin_logistic_regression(), opts);
    REQUIRE(std::holds_alternative<CascadeConfig>(outcome));
    CascadeConfig cfg = std::get<CascadeConfig>(outcome);
    const ModelBundle bundle = builtin_logistic_regression();

    SimulatedExecutor executor(data);
    std::vector<size_t> rows(200);
    std::iota(rows.begin(), rows.end(), size_t{0});

    SUBCASE("sentinel below min: approximate model answers everything") {
      cfg.threshold = -1.0;
      const auto got = predict_cascaded(cfg, graph, bundle, executor, rows);
      const Matrix x = project(data.take_rows(rows), cfg.approximate_model.feature_columns);
      CHECK(got == bundle.predict(cfg.approximate_model, x));
    }
    SUBCASE("threshold 1.0: original model answers everything") {
      cfg.threshold = 1.0;  // confidence <= 1 never strictly exceeds it
      const auto got = predict_cascaded(cfg, graph, bundle, executor, rows);
      const Matrix x = project(data.take_rows(rows), cfg.original_model.feature_columns);
      CHECK(got == bundle.predict(cfg.original_model, x));
    }
  }

  TEST_CASE("cascade meets the target on its calibration holdout") {
    auto [graph, data] = generate_workload(planted_spec(3000, 17));
    CascadeTrainOptions opts;
    opts.seed = 4;
    const CascadeOutcome outcome =
        train_cascade(graph, data, builtin_logistic_regression(), opts);
    REQUIRE(std::holds_alternative<CascadeConfig>(outcome));
    const CascadeConfig& cfg = std::get<CascadeConfig>(outcome);
    const ModelBundle bundle = builtin_logistic_regression();

    // Re-derive the same holdout split and replay the cascade over it.
    const auto [train_split, holdout] = train_holdout_split(data, opts.holdout_fraction, opts.seed);
    SimulatedExecutor executor(holdout);
    std::vector<size_t> rows(holdout.row_count);
    std::iota(rows.begin(), rows.end(), size_t{0});
    const auto preds = predict_cascaded(cfg, graph, bundle, executor, rows);
    const double score = bundle.score(preds, holdout.labels);
    CHECK(score == cfg.cascade_holdout_score);
    CHECK(score >= cfg.accuracy_target);
  }

  TEST_CASE("cascade holds up on a fresh validation split") {
    // Same distribution, disjoint rows: accuracy within noise allowance of
    // the target.
    auto [graph, work] = generate_workload(planted_spec(4000, 23));
    auto [graph2, fresh] = generate_workload(planted_spec(1500, 24));
    CascadeTrainOptions opts;
    opts.seed = 6;
    const CascadeOutcome outcome =
        train_cascade(graph, work, builtin_logistic_regression(), opts);
    REQUIRE(std::holds_alternative<CascadeConfig>(outcome));
    const CascadeConfig& cfg = std::get<CascadeConfig>(outcome);
    const ModelBundle bundle = builtin_logistic_regression();

    SimulatedExecutor executor(fresh);
    std::vector<size_t> rows(fresh.row_count);
    std::iota(rows.begin(), rows.end(), size_t{0});
    const auto preds = predict_cascaded(cfg, graph, bundle, executor, rows);
    CHECK(bundle.score(preds, fresh.labels) >= cfg.accuracy_target - 0.02);
  }
}
