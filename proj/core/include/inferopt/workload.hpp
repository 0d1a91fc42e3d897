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
#include <string>
#include <utility>
#include <vector>

#include "inferopt/dataset.hpp"
#include "inferopt/graph.hpp"

namespace inferopt {

struct WorkloadGroupSpec {
  int n_columns = 1;
  double cost_us = 0.0;          // fixed per-row cost of the group's node
  double signal_strength = 0.0;  // in [0, 1]
};

/// Declarative synthetic classification workload with planted structure.
struct SyntheticWorkloadSpec {
  size_t n_rows = 0;
  std::vector<WorkloadGroupSpec> groups;
  double easy_fraction = 0.0;  // rows classifiable from cheap groups alone
  double label_noise = 0.0;    // label flip probability
  uint64_t seed = 0;

  void validate() const;  // throws ValidationError
};

/// Parses the workload JSON document (see README for the schema).
SyntheticWorkloadSpec workload_spec_from_json(const std::string& text);

/// Deterministic workload generation. Labels are fair coin flips; each
/// feature is signal * (+1/-1 by label) + (1 - signal) * N(0,1) noise.
/// Groups whose cost lies strictly below the mean group cost count as
/// "cheap"; on rows outside the easy set their signal is damped to 20% of
/// nominal, so easy rows are the ones the cheap groups can classify alone.
/// After feature generation, labels flip with probability label_noise.
/// The graph carries one transform node per group with the declared fixed
/// cost; identical specs yield byte-identical datasets.
std::pair<TransformationGraph, Dataset> generate_workload(const SyntheticWorkloadSpec& spec);

}  // namespace inferopt
