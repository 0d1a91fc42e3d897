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

#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "inferopt/bench.hpp"
#include "inferopt/cascade.hpp"
#include "inferopt/dataset.hpp"
#include "inferopt/error.hpp"
#include "inferopt/graph.hpp"
#include "inferopt/rng.hpp"
#include "inferopt/serde.hpp"
#include "inferopt/topk.hpp"
#include "inferopt/workload.hpp"

namespace inferopt::cli {

namespace {

namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file '" + path.string() + "'");
  out << content;
}

struct Inputs {
  TransformationGraph graph;
  Dataset data;
};

/// Fail fast: every referenced file must exist, then parse, before any
/// optimization work starts.
Inputs load_inputs(const RunManifest& m) {
  const bool have_workload = !m.workload_path.empty();
  const bool have_files = !m.pipeline_path.empty() || !m.data_path.empty();
  if (have_workload && have_files) {
    throw ValidationError("--workload and --pipeline/--data are mutually exclusive");
  }
  if (!have_workload && (m.pipeline_path.empty() || m.data_path.empty())) {
    throw ValidationError("provide either --workload or both --pipeline and --data");
  }

  std::vector<std::string> required;
  if (have_workload) required.push_back(m.workload_path);
  if (!have_workload) {
    required.push_back(m.pipeline_path);
    required.push_back(m.data_path);
  }
  if (!m.config_path.empty()) required.push_back(m.config_path);
  for (const std::string& path : required) {
    if (!fs::exists(path)) throw ValidationError("file does not exist: '" + path + "'");
  }

  if (have_workload) {
    const SyntheticWorkloadSpec spec = workload_spec_from_json(read_file(m.workload_path));
    auto [graph, data] = generate_workload(spec);
    return Inputs{std::move(graph), std::move(data)};
  }
  TransformationGraph graph = load_graph(read_file(m.pipeline_path));
  Dataset data = load_dataset_csv(read_file(m.data_path));
  return Inputs{std::move(graph), std::move(data)};
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

nlohmann::json bench_report_json(const BenchReport& report) {
  nlohmann::json j;
  j["mode"] = report.mode == BenchMode::Batch   ? "batch"
              : report.mode == BenchMode::Point ? "point"
                                                : "topk";
  j["target"] = report.target_name;
  j["rows"] = report.rows;
  j["repetitions"] = report.repetitions;
  j["throughput_rows_per_s"] = report.throughput_rows_per_s;
  if (!report.latencies_us.empty()) {
    j["p50_us"] = report.p50_us;
    j["p99_us"] = report.p99_us;
  }
  j[report.mode == BenchMode::TopK ? "mean_precision" : "accuracy"] = report.accuracy;
  if (report.has_baseline) {
    j["baseline_throughput_rows_per_s"] = report.baseline_throughput_rows_per_s;
    j["throughput_ratio"] = report.throughput_ratio;
    if (report.p50_speedup > 0.0) {
      j["p50_speedup"] = report.p50_speedup;
      j["p99_speedup"] = report.p99_speedup;
    }
  }
  return j;
}

void emit_bench_outputs(const RunManifest& m, const BenchReport& report) {
  std::cout << bench_report_table(report);
  std::cout << bench_report_json(report).dump(2) << "\n";
  write_file(fs::path(m.out_dir) / "bench_report.json", bench_report_json(report).dump(2) + "\n");
  write_file(fs::path(m.out_dir) / "bench_latencies.csv", bench_latencies_csv(report));
}

CascadeTrainOptions cascade_options(const RunManifest& m) {
  CascadeTrainOptions opts;
  opts.seed = m.seed;
  if (m.accuracy_target) {
    opts.target_mode = TargetMode::Absolute;
    opts.target_value = *m.accuracy_target;
  } else {
    opts.target_mode = TargetMode::DeltaBelowOriginal;
    opts.target_value = m.accuracy_delta;
  }
  return opts;
}

}  // namespace

int cmd_analyze(const RunManifest& m) {
  Inputs in = load_inputs(m);

  auto [train_split, holdout] = train_holdout_split(in.data, 0.25, m.seed);
  const size_t sample_rows = std::min<size_t>(1000, train_split.row_count);
  std::vector<size_t> idx(sample_rows);
  std::iota(idx.begin(), idx.end(), size_t{0});
  const Dataset sample = train_split.take_rows(idx);
  SimulatedExecutor executor(sample);
  const NodeCosts costs = measure_node_costs(in.graph, sample, executor, 3);

  std::vector<FeatureGroup> groups = identify_feature_groups(in.graph, costs);
  const ModelBundle bundle = make_bundle(m.model_spec);
  const TrainedModel model = train_on(bundle, train_split, in.graph.feature_columns());
  for (FeatureGroup& fg : groups) {
    fg.importance = permutation_importance(fg, bundle, model, holdout, 3, m.seed);
  }

  std::ostringstream csv;
  csv << "group_id,columns,cost_us,importance\n";
  std::cout << "feature groups (" << groups.size() << "):\n";
  for (const FeatureGroup& fg : groups) {
    std::cout << "  group " << fg.id << ": columns [" << join(fg.columns, ", ")
              << "] cost_us " << fg.cost_us << " importance " << fg.importance << "\n";
    csv << fg.id << "," << join(fg.columns, ";") << "," << fg.cost_us << "," << fg.importance
        << "\n";
  }

  const SortResult sorted = sort_minimizing_transitions(in.graph);
  std::cout << "execution order: " << join(sorted.order, " -> ") << "\n";
  std::cout << "engine transitions: " << sorted.transitions << "\n";

  write_file(fs::path(m.out_dir) / "groups.csv", csv.str());
  return kOk;
}

int cmd_train_cascade(const RunManifest& m) {
  Inputs in = load_inputs(m);
  const ModelBundle bundle = make_bundle(m.model_spec);

  const CascadeOutcome outcome = train_cascade(in.graph, in.data, bundle, cascade_options(m));
  if (const auto* none = std::get_if<NoCascade>(&outcome)) {
    std::cout << "no cascade: " << none->detail << "\n";
    return kNoCascade;
  }
  const CascadeConfig& cfg = std::get<CascadeConfig>(outcome);

  const fs::path out_path = fs::path(m.out_dir) / "cascade_config.json";
  write_file(out_path, cascade_config_to_json(cfg, bundle));

  std::vector<std::string> ids;
  for (int id : cfg.selected_groups) ids.push_back(std::to_string(id));
  std::cout << "selected groups S: {" << join(ids, ", ") << "}\n";
  std::cout << "threshold t:       " << cfg.threshold << "\n";
  std::cout << "h_S:               " << cfg.holdout_approx_fraction << "\n";
  std::cout << "expected cost p_t: " << cfg.expected_cost_us << " us/row\n";
  std::cout << "predicted speedup: " << cfg.cost_f_us / cfg.expected_cost_us << "x\n";
  std::cout << "config written:    " << out_path.string() << "\n";
  return kOk;
}

int cmd_train_topk(const RunManifest& m) {
  Inputs in = load_inputs(m);
  const ModelBundle bundle = make_bundle(m.model_spec);
  if (m.n_dist.empty()) throw ValidationError("train-topk requires --n-dist");

  TopKTrainOptions opts;
  opts.seed = m.seed;
  opts.accuracy_bound = m.accuracy_target.value_or(0.95);

  const TopKConfig cfg = train_topk(in.graph, in.data, bundle, m.k_dist, m.n_dist, opts);

  const fs::path out_path = fs::path(m.out_dir) / "topk_config.json";
  write_file(out_path, topk_config_to_json(cfg, bundle));

  std::vector<std::string> ids;
  for (int id : cfg.selected_groups) ids.push_back(std::to_string(id));
  std::cout << "selected groups S: {" << join(ids, ", ") << "}\n";
  std::cout << "r_S:               " << cfg.r_factor << (cfg.degraded ? " (degraded)" : "")
            << "\n";
  std::cout << "expected cost p_t: " << cfg.expected_cost_us << " us/query\n";
  std::cout << "exact-query cost:  " << cfg.cost_f_us * cfg.n_bar << " us/query\n";
  std::cout << "config written:    " << out_path.string() << "\n";
  if (cfg.degraded) {
    std::cout << "warning: no rank-expansion factor met the accuracy bound; the filter ranks "
                 "everything\n";
    return kNoCascade;
  }
  return kOk;
}

int cmd_bench(const RunManifest& m) {
  Inputs in = load_inputs(m);
  const ModelBundle bundle = make_bundle(m.model_spec);

  // Benchmarks report on a validation split the optimizer never saw.
  auto [work, validation] = train_holdout_split(in.data, 0.2, mix_seed(m.seed, 0x76616c));

  BenchRequest req;
  req.graph = &in.graph;
  req.validation = &validation;
  req.bundle = &bundle;
  req.repetitions = m.repetitions;
  req.seed = m.seed;
  if (m.queries > 0) {
    req.point_queries = m.queries;
    req.topk_queries = m.queries;
  }

  if (m.mode == "batch" || m.mode == "point") {
    req.mode = m.mode == "batch" ? BenchMode::Batch : BenchMode::Point;
    std::optional<CascadeConfig> cfg;
    TrainedModel original;
    if (!m.config_path.empty()) {
      cfg = cascade_config_from_json(read_file(m.config_path));
      if (make_bundle(cfg->bundle_name).name != bundle.name) {
        throw ValidationError("config was trained with bundle '" + cfg->bundle_name + "'");
      }
      original = cfg->original_model;
      req.target = BenchTarget::cascade_config(*cfg);
      req.baseline = BenchTarget::full_pipeline(original);
    } else {
      original = train_on(bundle, work, in.graph.feature_columns());
      req.target = BenchTarget::full_pipeline(original);
      req.baseline = BenchTarget::full_pipeline(original);
    }
    const BenchReport report = run_bench(req);
    emit_bench_outputs(m, report);
    return kOk;
  }

  if (m.mode == "topk") {
    if (m.config_path.empty()) throw ValidationError("topk bench mode requires --config");
    req.mode = BenchMode::TopK;
    const TopKConfig cfg = topk_config_from_json(read_file(m.config_path));
    req.target = BenchTarget::topk_approx(cfg);
    req.baseline = BenchTarget::topk_exact(cfg);
    const BenchReport report = run_bench(req);
    emit_bench_outputs(m, report);
    return kOk;
  }

  throw ValidationError("unknown bench mode '" + m.mode + "' (batch, point, topk)");
}

}  // namespace inferopt::cli
