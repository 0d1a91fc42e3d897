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

#include <map>
#include <span>
#include <string>
#include <vector>

#include "inferopt/dataset.hpp"
#include "inferopt/graph.hpp"

namespace inferopt {

/// Feature columns computed for a row subset, in the subset's order.
using ColumnBlock = std::map<std::string, std::vector<double>>;

/// Runs transformation nodes over rows of some backing input source.
class FeatureExecutor {
 public:
  virtual ~FeatureExecutor() = default;

  virtual size_t row_count() const = 0;

  /// Computes the output features of `node` for the given rows, adding one
  /// column of rows.size() values per output feature to `out`. Failures are
  /// reported as ExecutorError carrying the node id.
  virtual void execute(const TransformNode& node, std::span<const size_t> rows,
                       ColumnBlock& out) = 0;
};

/// Spins until `us` microseconds of wall clock elapse. Spin, not sleep:
/// sleep granularity would corrupt microsecond-scale point measurements.
void busy_wait_us(double us);

/// Executor that simulates node cost against a dataset that already holds
/// all feature values: fixed-cost nodes spin for rows x fixed_us before the
/// column copy, "measure" nodes just do the copy (which is then what
/// measure_node_costs times).
class SimulatedExecutor : public FeatureExecutor {
 public:
  explicit SimulatedExecutor(const Dataset& backing) : backing_(&backing) {}

  size_t row_count() const override { return backing_->row_count; }
  void execute(const TransformNode& node, std::span<const size_t> rows,
               ColumnBlock& out) override;

 private:
  const Dataset* backing_;
};

}  // namespace inferopt
