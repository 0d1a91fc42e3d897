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

#include <functional>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "commands.hpp"
#include "inferopt/error.hpp"

namespace {

using inferopt::cli::RunManifest;

std::vector<int> parse_dist(const std::string& text, const std::string& flag) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (!j.is_array() || j.empty()) throw inferopt::ParseError(flag + " must be a JSON array");
    std::vector<int> out;
    for (const auto& v : j) {
      if (!v.is_number_integer()) {
        throw inferopt::ParseError(flag + " must contain integers");
      }
      out.push_back(v.get<int>());
    }
    return out;
  } catch (const nlohmann::json::exception&) {
    throw inferopt::ParseError(flag + " is not a JSON array of integers: " + text);
  }
}

void add_common_flags(CLI::App* cmd, RunManifest& m, std::string& k_text, std::string& n_text) {
  cmd->add_option("--pipeline", m.pipeline_path, "pipeline spec JSON");
  cmd->add_option("--data", m.data_path, "dataset CSV");
  cmd->add_option("--workload", m.workload_path, "synthetic workload JSON");
  cmd->add_option("--seed", m.seed, "RNG seed");
  cmd->add_option("--accuracy-target", m.accuracy_target, "absolute accuracy target");
  cmd->add_option("--accuracy-delta", m.accuracy_delta,
                  "accuracy target = original - delta (default 0.001)");
  cmd->add_option("--k-dist", k_text, "K distribution, JSON array (default [20])");
  cmd->add_option("--n-dist", n_text, "N distribution, JSON array");
  cmd->add_option("--model", m.model_spec, "model bundle: logistic | stumps[:N] | linreg");
  cmd->add_option("--out", m.out_dir, "output directory (default .)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"optimizer for feature-computation-bound ML inference pipelines"};
  app.require_subcommand(1);

  RunManifest manifest;
  std::string k_text, n_text;

  CLI::App* analyze = app.add_subcommand("analyze", "print feature groups with cost and importance");
  add_common_flags(analyze, manifest, k_text, n_text);

  CLI::App* train_cascade =
      app.add_subcommand("train-cascade", "train an end-to-end cascade config");
  add_common_flags(train_cascade, manifest, k_text, n_text);

  CLI::App* train_topk = app.add_subcommand("train-topk", "train an approximate top-K config");
  add_common_flags(train_topk, manifest, k_text, n_text);

  CLI::App* bench = app.add_subcommand("bench", "measure throughput / latency / precision");
  add_common_flags(bench, manifest, k_text, n_text);
  bench->add_option("--mode", manifest.mode, "batch | point | topk");
  bench->add_option("--config", manifest.config_path, "trained config JSON");
  bench->add_option("--repetitions", manifest.repetitions, "batch repetitions");
  bench->add_option("--queries", manifest.queries, "point/topk query count");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!k_text.empty()) manifest.k_dist = parse_dist(k_text, "--k-dist");
    if (!n_text.empty()) manifest.n_dist = parse_dist(n_text, "--n-dist");

    if (analyze->parsed()) return inferopt::cli::cmd_analyze(manifest);
    if (train_cascade->parsed()) return inferopt::cli::cmd_train_cascade(manifest);
    if (train_topk->parsed()) return inferopt::cli::cmd_train_topk(manifest);
    if (bench->parsed()) return inferopt::cli::cmd_bench(manifest);
    std::cerr << "no subcommand\n";
    return inferopt::cli::kValidationFailure;
  } catch (const inferopt::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return inferopt::cli::kValidationFailure;
  } catch (const inferopt::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return inferopt::cli::kValidationFailure;
  } catch (const inferopt::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return inferopt::cli::kRuntimeFailure;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return inferopt::cli::kRuntimeFailure;
  }
}
