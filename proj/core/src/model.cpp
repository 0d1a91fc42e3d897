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

#include "inferopt/model.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>

#include "inferopt/error.hpp"

namespace inferopt {

TrainedModel train_on(const ModelBundle& bundle, const Dataset& d,
                      const std::vector<std::string>& cols) {
  TrainedModel m = bundle.train(project(d, cols), d.labels);
  m.feature_columns = cols;
  return m;
}

ModelBundle make_bundle(const std::string& spec) {
  if (spec == "logistic") return builtin_logistic_regression();
  if (spec == "linreg") return builtin_linear_regression();
  if (spec.rfind("stumps:", 0) == 0) {
    const std::string arg = spec.substr(7);
    int rounds = 0;
    auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), rounds);
    if (ec != std::errc{} || ptr != arg.data() + arg.size() || rounds < 1) {
      throw ParseError("invalid stump round count '" + arg + "'");
    }
    return builtin_stump_ensemble(rounds);
  }
  if (spec == "stumps") return builtin_stump_ensemble(50);
  throw ParseError("unknown model bundle '" + spec + "' (expected logistic, stumps[:N], linreg)");
}

double measure_inference_us_per_row(const ModelBundle& bundle, const TrainedModel& model,
                                    const Matrix& x, int repetitions) {
  if (x.rows == 0 || repetitions < 1) {
    throw ValidationError("inference cost measurement needs rows and repetitions >= 1");
  }
  std::vector<double> per_row(static_cast<size_t>(repetitions));
  for (double& sample : per_row) {
    const auto start = std::chrono::steady_clock::now();
    volatile double sink = bundle.predict(model, x)[0];
    (void)sink;
    const auto stop = std::chrono::steady_clock::now();
    sample = std::chrono::duration<double, std::micro>(stop - start).count() /
             static_cast<double>(x.rows);
  }
  std::sort(per_row.begin(), per_row.end());
  return per_row[per_row.size() / 2];
}

}  // namespace inferopt
