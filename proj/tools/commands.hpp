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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace inferopt::cli {

// Exit codes shared by all subcommands.
inline constexpr int kOk = 0;
inline constexpr int kValidationFailure = 2;
inline constexpr int kNoCascade = 3;  // also degraded top-K guarantees
inline constexpr int kRuntimeFailure = 4;

/// Everything a run needs, resolved from flags. All referenced files must
/// exist and parse before any work begins.
struct RunManifest {
  std::string pipeline_path;  // pipeline spec JSON (with --data)
  std::string data_path;      // dataset CSV
  std::string workload_path;  // synthetic workload JSON (alternative input)
  uint64_t seed = 0;
  std::optional<double> accuracy_target;  // absolute target
  double accuracy_delta = 0.001;          // default: 0.1% below original
  std::vector<int> k_dist{20};
  std::vector<int> n_dist;
  std::string model_spec = "logistic";
  std::string out_dir = ".";
  std::string config_path;
  std::string mode = "batch";  // bench mode: batch | point | topk
  int repetitions = 3;
  int queries = 0;  // 0: mode default (200 point / 50 topk)
};

int cmd_analyze(const RunManifest& manifest);
int cmd_train_cascade(const RunManifest& manifest);
int cmd_train_topk(const RunManifest& manifest);
int cmd_bench(const RunManifest& manifest);

}  // namespace inferopt::cli
