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

#include <optional>
#include <string>
#include <vector>

#include "inferopt/cascade.hpp"
#include "inferopt/topk.hpp"

namespace inferopt {

enum class BenchMode { Batch, Point, TopK };

/// What to measure. FullPipeline / TopKExact are the no-optimization
/// baselines and need the original model; Cascade / TopKApprox run the
/// trained configs.
struct BenchTarget {
  enum class Kind { FullPipeline, Cascade, TopKExact, TopKApprox };
  Kind kind = Kind::FullPipeline;
  const CascadeConfig* cascade = nullptr;
  const TopKConfig* topk = nullptr;
  const TrainedModel* original = nullptr;

  static BenchTarget full_pipeline(const TrainedModel& m);
  static BenchTarget cascade_config(const CascadeConfig& c);
  static BenchTarget topk_exact(const TopKConfig& c);
  static BenchTarget topk_approx(const TopKConfig& c);
};

struct BenchRequest {
  BenchMode mode = BenchMode::Batch;
  const TransformationGraph* graph = nullptr;
  const Dataset* validation = nullptr;
  const ModelBundle* bundle = nullptr;
  BenchTarget target;
  std::optional<BenchTarget> baseline;  // measured with identical queries
  int repetitions = 3;
  int point_queries = 200;  // >= 100 enforced in point mode
  int topk_queries = 50;
  uint64_t seed = 0;
};

/// Timing and accuracy measurements for one target (plus baseline ratios
/// when a baseline was supplied). Everything runs on the calling thread;
/// the harness never spawns workers, so measurements stay single-threaded.
struct BenchReport {
  BenchMode mode = BenchMode::Batch;
  std::string target_name;
  size_t rows = 0;     // batch rows, point queries, or top-K queries
  int repetitions = 0;

  double throughput_rows_per_s = 0.0;
  double p50_us = 0.0;  // per-query latency percentiles (point / topk modes)
  double p99_us = 0.0;

  /// Classification accuracy (batch/point) or mean top-K precision.
  double accuracy = 0.0;
  std::vector<double> predictions;          // saved predictions (batch/point)
  std::vector<double> per_query_precision;  // per query (topk mode)
  std::vector<double> latencies_us;         // per query (point / topk modes)

  bool has_baseline = false;
  double baseline_throughput_rows_per_s = 0.0;
  double throughput_ratio = 0.0;  // target / baseline
  double p50_speedup = 0.0;       // baseline p50 / target p50
  double p99_speedup = 0.0;
};

BenchReport run_bench(const BenchRequest& req);

/// Human-readable one-report table.
std::string bench_report_table(const BenchReport& report);

/// CSV of per-query latencies ("query,latency_us").
std::string bench_latencies_csv(const BenchReport& report);

}  // namespace inferopt
