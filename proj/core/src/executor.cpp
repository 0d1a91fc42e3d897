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

#include "inferopt/executor.hpp"

#include <chrono>

#include "inferopt/error.hpp"

namespace inferopt {

void busy_wait_us(double us) {
  if (us <= 0.0) return;
  const auto start = std::chrono::steady_clock::now();
  const auto wait = std::chrono::duration<double, std::micro>(us);
  while (std::chrono::steady_clock::now() - start < wait) {
    // spin
  }
}

void SimulatedExecutor::execute(const TransformNode& node, std::span<const size_t> rows,
                                ColumnBlock& out) {
  if (!node.cost_spec.measure && node.kind == NodeKind::Transform) {
    busy_wait_us(node.cost_spec.fixed_us * static_cast<double>(rows.size()));
  }
  for (const std::string& feature : node.output_features) {
    auto it = backing_->columns.find(feature);
    if (it == backing_->columns.end()) {
      throw ExecutorError(node.id, "backing dataset has no column '" + feature + "'");
    }
    std::vector<double> col;
    col.reserve(rows.size());
    for (size_t r : rows) {
      if (r >= backing_->row_count) {
        throw ExecutorError(node.id, "row index out of range");
      }
      col.push_back(it->second[r]);
    }
    out[feature] = std::move(col);
  }
}

}  // namespace inferopt
