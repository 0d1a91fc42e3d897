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

#include "inferopt/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "exec_plan.hpp"
#include "inferopt/rng.hpp"

namespace inferopt {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_us(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double, std::micro>(b - a).count();
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const size_t rank = static_cast<size_t>(
      std::ceil(q * static_cast<double>(values.size())));
  return values[std::min(values.size() - 1, rank == 0 ? 0 : rank - 1)];
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return values[values.size() / 2];
}

const char* target_name(BenchTarget::Kind kind) {
  switch (kind) {
    case BenchTarget::Kind::FullPipeline: return "full-pipeline";
    case BenchTarget::Kind::Cascade: return "cascade";
    case BenchTarget::Kind::TopKExact: return "topk-exact";
    case BenchTarget::Kind::TopKApprox: return "topk-approx";
  }
  return "?";
}

std::vector<double> run_predictions(const BenchRequest& req, const BenchTarget& target,
                                    FeatureExecutor& executor, std::span<const size_t> rows) {
  switch (target.kind) {
    case BenchTarget::Kind::FullPipeline:
      return predict_full(*target.original, *req.graph, *req.bundle, executor, rows);
    case BenchTarget::Kind::Cascade:
      return predict_cascaded(*target.cascade, *req.graph, *req.bundle, executor, rows);
    default:
      throw ValidationError("batch/point modes need a full-pipeline or cascade target");
  }
}

BenchReport run_batch(const BenchRequest& req, const BenchTarget& target) {
  BenchReport report;
  report.mode = BenchMode::Batch;
  report.target_name = target_name(target.kind);
  report.rows = req.validation->row_count;
  report.repetitions = req.repetitions;

  std::vector<size_t> rows(req.validation->row_count);
  std::iota(rows.begin(), rows.end(), size_t{0});
  SimulatedExecutor executor(*req.validation);

  std::vector<double> times_us;
  std::vector<double> predictions;
  for (int rep = 0; rep < req.repetitions; ++rep) {
    const auto t0 = Clock::now();
    predictions = run_predictions(req, target, executor, rows);
    const auto t1 = Clock::now();
    times_us.push_back(elapsed_us(t0, t1));
  }
  report.throughput_rows_per_s =
      static_cast<double>(rows.size()) / (median(times_us) * 1e-6);
  report.accuracy = req.bundle->score(predictions, req.validation->labels);
  report.predictions = std::move(predictions);
  return report;
}

BenchReport run_point(const BenchRequest& req, const BenchTarget& target) {
  const size_t queries =
      std::min(static_cast<size_t>(req.point_queries), req.validation->row_count);
  if (queries < 100) {
    throw ValidationError("point mode needs at least 100 queries (validation too small)");
  }

  BenchReport report;
  report.mode = BenchMode::Point;
  report.target_name = target_name(target.kind);
  report.rows = queries;
  report.repetitions = req.repetitions;

  SimulatedExecutor executor(*req.validation);
  std::vector<double> predictions(queries);
  double total_us = 0.0;
  for (int rep = 0; rep < req.repetitions; ++rep) {
    for (size_t q = 0; q < queries; ++q) {
      const size_t row = q;
      const auto t0 = Clock::now();
      const std::vector<double> pred =
          run_predictions(req, target, executor, std::span<const size_t>(&row, 1));
      const auto t1 = Clock::now();
      report.latencies_us.push_back(elapsed_us(t0, t1));
      total_us += report.latencies_us.back();
      predictions[q] = pred[0];
    }
  }
  report.throughput_rows_per_s = static_cast<double>(report.latencies_us.size()) /
                                 (total_us * 1e-6);
  report.p50_us = percentile(report.latencies_us, 0.50);
  report.p99_us = percentile(report.latencies_us, 0.99);
  std::vector<double> labels(req.validation->labels.begin(),
                             req.validation->labels.begin() + static_cast<ptrdiff_t>(queries));
  report.accuracy = req.bundle->score(predictions, labels);
  report.predictions = std::move(predictions);
  return report;
}

BenchReport run_topk(const BenchRequest& req, const BenchTarget& target) {
  const TopKConfig* cfg = target.topk;
  if (!cfg) throw ValidationError("topk mode needs a TopKConfig target");

  BenchReport report;
  report.mode = BenchMode::TopK;
  report.target_name = target_name(target.kind);
  report.rows = static_cast<size_t>(req.topk_queries);
  report.repetitions = 1;

  SimulatedExecutor executor(*req.validation);

  // Untimed oracle scores for precision accounting.
  const Matrix x_all = project(*req.validation, cfg->original_model.feature_columns);
  const std::vector<double> oracle_scores =
      req.bundle->rank_scores(cfg->original_model, x_all);

  double total_us = 0.0;
  size_t rows_scored = 0;
  for (int q = 0; q < req.topk_queries; ++q) {
    Rng rng(mix_seed(req.seed, static_cast<uint64_t>(q)));
    const int k = cfg->k_dist[rng.below(cfg->k_dist.size())];
    const size_t n = std::min(static_cast<size_t>(cfg->n_dist[rng.below(cfg->n_dist.size())]),
                              req.validation->row_count);
    const std::vector<size_t> sample = rng.sample_indices(req.validation->row_count, n);

    std::vector<size_t> result;
    const auto t0 = Clock::now();
    if (target.kind == BenchTarget::Kind::TopKApprox) {
      result = query_topk(*cfg, *req.graph, *req.bundle, executor, sample, k);
    } else {
      result = query_topk_exact(cfg->original_model, *req.graph, *req.bundle, executor, sample, k);
    }
    const auto t1 = Clock::now();
    report.latencies_us.push_back(elapsed_us(t0, t1));
    total_us += report.latencies_us.back();
    rows_scored += n;

    // Exact top-K of the sample by oracle score, ties by row id.
    const size_t k_eff = std::min(static_cast<size_t>(k), n);
    std::vector<size_t> ordered = sample;
    std::sort(ordered.begin(), ordered.end(), [&](size_t a, size_t b) {
      if (oracle_scores[a] != oracle_scores[b]) return oracle_scores[a] > oracle_scores[b];
      return a < b;
    });
    const std::set<size_t> exact(ordered.begin(), ordered.begin() + static_cast<ptrdiff_t>(k_eff));
    size_t overlap = 0;
    for (size_t id : result) {
      if (exact.count(id)) ++overlap;
    }
    report.per_query_precision.push_back(static_cast<double>(overlap) /
                                         static_cast<double>(k_eff));
  }

  report.throughput_rows_per_s = static_cast<double>(rows_scored) / (total_us * 1e-6);
  report.p50_us = percentile(report.latencies_us, 0.50);
  report.p99_us = percentile(report.latencies_us, 0.99);
  report.accuracy =
      std::accumulate(report.per_query_precision.begin(), report.per_query_precision.end(), 0.0) /
      static_cast<double>(report.per_query_precision.size());
  return report;
}

BenchReport run_target(const BenchRequest& req, const BenchTarget& target) {
  switch (req.mode) {
    case BenchMode::Batch: return run_batch(req, target);
    case BenchMode::Point: return run_point(req, target);
    case BenchMode::TopK: return run_topk(req, target);
  }
  throw ValidationError("unknown bench mode");
}

}  // namespace

BenchTarget BenchTarget::full_pipeline(const TrainedModel& m) {
  BenchTarget t;
  t.kind = Kind::FullPipeline;
  t.original = &m;
  return t;
}
BenchTarget BenchTarget::cascade_config(const CascadeConfig& c) {
  BenchTarget t;
  t.kind = Kind::Cascade;
  t.cascade = &c;
  return t;
}
BenchTarget BenchTarget::topk_exact(const TopKConfig& c) {
  BenchTarget t;
  t.kind = Kind::TopKExact;
  t.topk = &c;
  return t;
}
BenchTarget BenchTarget::topk_approx(const TopKConfig& c) {
  BenchTarget t;
  t.kind = Kind::TopKApprox;
  t.topk = &c;
  return t;
}

BenchReport run_bench(const BenchRequest& req) {
  if (!req.graph || !req.validation || !req.bundle) {
    throw ValidationError("bench request is missing graph, validation data, or bundle");
  }
  BenchReport report = run_target(req, req.target);
  if (req.baseline) {
    const BenchReport base = run_target(req, *req.baseline);
    report.has_baseline = true;
    report.baseline_throughput_rows_per_s = base.throughput_rows_per_s;
    report.throughput_ratio = report.throughput_rows_per_s / base.throughput_rows_per_s;
    if (base.p50_us > 0.0 && report.p50_us > 0.0) {
      report.p50_speedup = base.p50_us / report.p50_us;
      report.p99_speedup = base.p99_us / report.p99_us;
    }
  }
  return report;
}

std::string bench_report_table(const BenchReport& report) {
  std::ostringstream out;
  const char* mode = report.mode == BenchMode::Batch   ? "batch"
                     : report.mode == BenchMode::Point ? "point"
                                                       : "topk";
  out << "mode            " << mode << "\n";
  out << "target          " << report.target_name << "\n";
  out << "queries/rows    " << report.rows << "\n";
  out << "throughput      " << report.throughput_rows_per_s << " rows/s\n";
  if (!report.latencies_us.empty()) {
    out << "latency p50     " << report.p50_us << " us\n";
    out << "latency p99     " << report.p99_us << " us\n";
  }
  out << (report.mode == BenchMode::TopK ? "mean precision  " : "accuracy        ")
      << report.accuracy << "\n";
  if (report.has_baseline) {
    out << "throughput x    " << report.throughput_ratio << " vs baseline\n";
    if (report.p50_speedup > 0.0) {
      out << "p50 speedup     " << report.p50_speedup << "\n";
      out << "p99 speedup     " << report.p99_speedup << "\n";
    }
  }
  return out.str();
}

std::string bench_latencies_csv(const BenchReport& report) {
  std::ostringstream out;
  out << "query,latency_us\n";
  for (size_t i = 0; i < report.latencies_us.size(); ++i) {
    out << i << "," << report.latencies_us[i] << "\n";
  }
  return out.str();
}

}  // namespace inferopt
