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
#include <numeric>

#include <doctest.h>

#include "helpers.hpp"
#include "inferopt/rng.hpp"
#include "inferopt/workload.hpp"

using namespace inferopt;

namespace {

SyntheticWorkloadSpec ranking_spec(size_t rows, uint64_t seed) {
  SyntheticWorkloadSpec spec;
  spec.n_rows = rows;
  spec.seed = seed;
  spec.easy_fraction = 1.0;  // uniform signal; no easy/hard planting
  spec.label_noise = 0.0;
  spec.groups = {{6, 10.0, 0.7}, {2, 90.0, 0.2}};
  return spec;
}

/// Brute-force exact top-k of `rows` by the given scores (higher first,
/// ties by row id). Oracle for query results.
std::vector<size_t> brute_force_topk(const std::vector<double>& all_scores,
                                     std::span<const size_t> rows, size_t k) {
  std::vector<size_t> ids(rows.begin(), rows.end());
  std::sort(ids.begin(), ids.end(), [&](size_t a, size_t b) {
    if (all_scores[a] != all_scores[b]) return all_scores[a] > all_scores[b];
    return a < b;
  });
  ids.resize(std::min(k, ids.size()));
  return ids;
}

}  // namespace

TEST_SUITE("topk") {
  TEST_CASE("eq2 spot values") {
    CHECK(eval_eq2(1.0, 10.0, 1000.0, 20.0, 4) == 1720.0);   // 1000 + 9*80
    CHECK(eval_eq2(10.0, 10.0, 500.0, 20.0, 7) == 5000.0);   // filter as dear as the model
    CHECK(eval_eq2(0.0, 10.0, 100.0, 20.0, 5) == 1000.0);    // r*K == N, no savings
  }

  TEST_CASE("choose_r returns 1 when the filter is the oracle") {
    Rng rng(71);
    std::vector<double> scores(500);
    for (double& s : scores) s = rng.uniform01();
    ChooseROptions opts;
    opts.seed = 3;
    const ChooseRResult r = choose_r(scores, scores, {20}, {200}, AccuracyMetric::Precision,
                                     0.95, opts);
    CHECK(r.r == 1);
    CHECK_FALSE(r.degraded);
    CHECK(r.successes_by_r.front() == 100);
  }

  TEST_CASE("choose_r escalates to the cap on an adversarial filter") {
    std::vector<double> truth(300);
    std::iota(truth.begin(), truth.end(), 0.0);
    std::vector<double> reversed(truth.rbegin(), truth.rend());
    ChooseROptions opts;
    opts.seed = 5;
    const ChooseRResult r =
        choose_r(reversed, truth, {5}, {50}, AccuracyMetric::Precision, 0.95, opts);
    CHECK(r.r == 10);  // ceil(max N / min K)
    CHECK(r.degraded);
  }

  TEST_CASE("choose_r per-trial successes are monotone in r") {
    Rng rng(72);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<double> truth(300), approx(300);
      for (size_t i = 0; i < 300; ++i) {
        truth[i] = rng.normal();
        approx[i] = 0.6 * truth[i] + 0.4 * rng.normal();  // noisy filter
      }
      ChooseROptions opts;
      opts.seed = 100 + static_cast<uint64_t>(trial);
      const ChooseRResult r =
          choose_r(approx, truth, {10}, {100}, AccuracyMetric::Precision, 0.9, opts);
      for (size_t i = 1; i < r.successes_by_r.size(); ++i) {
        CHECK(r.successes_by_r[i] >= r.successes_by_r[i - 1]);
      }
      if (r.successes_by_r.size() >= 2 && !r.degraded) {
        CHECK(r.successes_by_r.back() >= r.successes_by_r[r.successes_by_r.size() - 2]);
      }
    }
  }

  TEST_CASE("choose_r rejects a holdout smaller than max N") {
    std::vector<double> scores(50, 1.0);
    ChooseROptions opts;
    CHECK_THROWS_WITH_AS(
        choose_r(scores, scores, {5}, {100}, AccuracyMetric::Precision, 0.9, opts),
        doctest::Contains("smaller than max N"), ValidationError);
  }

  TEST_CASE("choose_r is deterministic given its seed") {
    Rng rng(73);
    std::vector<double> truth(200), approx(200);
    for (size_t i = 0; i < 200; ++i) {
      truth[i] = rng.normal();
      approx[i] = 0.8 * truth[i] + 0.2 * rng.normal();
    }
    ChooseROptions opts;
    opts.seed = 17;
    const ChooseRResult a =
        choose_r(approx, truth, {10}, {100}, AccuracyMetric::Precision, 0.9, opts);
    const ChooseRResult b =
        choose_r(approx, truth, {10}, {100}, AccuracyMetric::Precision, 0.9, opts);
    CHECK(a.r == b.r);
    CHECK(a.successes_by_r == b.successes_by_r);
  }

  TEST_CASE("train_topk on the planted ranking workload picks the cheap filter") {
    auto [graph, data] = generate_workload(ranking_spec(6000, 11));
    TopKTrainOptions opts;
    opts.seed = 42;
    const TopKConfig cfg =
        train_topk(graph, data, builtin_logistic_regression(), {20}, {1000}, opts);

    CHECK(cfg.selected_groups == std::set<int>{1});
    CHECK(cfg.cost_s_us <= 0.2 * cfg.cost_f_us);
    CHECK(cfg.expected_cost_us <= 0.5 * cfg.cost_f_us * cfg.n_bar);
    CHECK_FALSE(cfg.degraded);
    CHECK(cfg.r_factor * cfg.k_bar <= cfg.n_bar);
    // Eq. 2 consistency: stored parts recompute the stored value exactly.
    CHECK(eval_eq2(cfg.cost_s_us, cfg.cost_f_us, cfg.n_bar, cfg.k_bar, cfg.r_factor) ==
          cfg.expected_cost_us);
  }

  TEST_CASE("point-mass K equal to N returns r = 1") {
    auto [graph, data] = generate_workload(ranking_spec(1600, 12));
    TopKTrainOptions opts;
    opts.seed = 9;
    // Holdout is 0.25 * 1600 = 400 rows; a query over all 400 with K = 400
    // returns everything, so any filter is exact.
    const TopKConfig cfg =
        train_topk(graph, data, builtin_logistic_regression(), {400}, {400}, opts);
    CHECK(cfg.r_factor == 1);
    CHECK_FALSE(cfg.degraded);
  }

  TEST_CASE("a vacuous accuracy bound yields r = 1 and the cheapest set") {
    auto [graph, data] = generate_workload(ranking_spec(2000, 13));
    TopKTrainOptions opts;
    opts.seed = 10;
    opts.accuracy_bound = 0.0;
    const TopKConfig cfg =
        train_topk(graph, data, builtin_logistic_regression(), {20}, {400}, opts);
    CHECK(cfg.r_factor == 1);
    CHECK(cfg.selected_groups == std::set<int>{1});
  }

  TEST_CASE("query_topk") {
    auto [graph, data] = generate_workload(ranking_spec(3000, 14));
    TopKTrainOptions opts;
    opts.seed = 21;
    const ModelBundle bundle = builtin_logistic_regression();
    const TopKConfig cfg = train_topk(graph, data, bundle, {20}, {500}, opts);

    SimulatedExecutor executor(data);
    const Matrix x_all = project(data, cfg.original_model.feature_columns);
    const std::vector<double> oracle_scores = bundle.rank_scores(cfg.original_model, x_all);

    Rng rng(15);
    const std::vector<size_t> sample = rng.sample_indices(data.row_count, 500);

    SUBCASE("output is a sorted subset of the input") {
      const auto got = query_topk(cfg, graph, bundle, executor, sample, 20);
      REQUIRE(got.size() == 20);
      const std::set<size_t> input(sample.begin(), sample.end());
      for (size_t id : got) CHECK(input.count(id));
      for (size_t i = 1; i < got.size(); ++i) {
        const bool strictly_after =
            oracle_scores[got[i - 1]] > oracle_scores[got[i]] ||
            (oracle_scores[got[i - 1]] == oracle_scores[got[i]] && got[i - 1] < got[i]);
        CHECK(strictly_after);
      }
    }
    SUBCASE("r*k covering the input reproduces the exact top-k") {
      std::vector<size_t> small(sample.begin(), sample.begin() + 40);
      TopKConfig wide = cfg;
      wide.r_factor = 100;  // 100 * 20 >= 40: no filtering
      const auto got = query_topk(wide, graph, bundle, executor, small, 20);
      CHECK(got == brute_force_topk(oracle_scores, small, 20));
    }
    SUBCASE("k covering the input returns a full ranking") {
      std::vector<size_t> small(sample.begin(), sample.begin() + 30);
      const auto got = query_topk(cfg, graph, bundle, executor, small, 30);
      CHECK(got.size() == 30);
      CHECK(got == brute_force_topk(oracle_scores, small, 30));
    }
    SUBCASE("matches the exact query path") {
      const auto exact = query_topk_exact(cfg.original_model, graph, bundle, executor, sample, 20);
      CHECK(exact == brute_force_topk(oracle_scores, sample, 20));
    }
  }

  TEST_CASE("planted workload precision against the brute-force oracle") {
    // Mirrors the acceptance setup at a smaller scale: most seeded queries
    // must reach 0.95 precision against exact scoring.
    auto [graph, data] = generate_workload(ranking_spec(4000, 16));
    TopKTrainOptions opts;
    opts.seed = 33;
    const ModelBundle bundle = builtin_logistic_regression();
    const TopKConfig cfg = train_topk(graph, data, bundle, {20}, {800}, opts);

    SimulatedExecutor executor(data);
    const Matrix x_all = project(data, cfg.original_model.feature_columns);
    const std::vector<double> oracle_scores = bundle.rank_scores(cfg.original_model, x_all);

    int hits = 0;
    const int n_queries = 30;
    for (int q = 0; q < n_queries; ++q) {
      Rng rng(mix_seed(99, static_cast<uint64_t>(q)));
      const std::vector<size_t> sample = rng.sample_indices(data.row_count, 800);
      const auto got = query_topk(cfg, graph, bundle, executor, sample, 20);
      const auto exact = brute_force_topk(oracle_scores, sample, 20);
      const std::set<size_t> exact_set(exact.begin(), exact.end());
      size_t overlap = 0;
      for (size_t id : got) {
        if (exact_set.count(id)) ++overlap;
      }
      if (static_cast<double>(overlap) / 20.0 >= 0.95) ++hits;
    }
    CHECK(hits >= n_queries * 9 / 10);
  }
}
