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

#include "inferopt/stats.hpp"

#include <cmath>

#include "inferopt/error.hpp"

namespace inferopt {

double wilson_lower_bound(uint64_t successes, uint64_t trials, double z) {
  if (trials == 0) throw ValidationError("wilson_lower_bound requires trials > 0");
  if (successes > trials) throw ValidationError("successes exceed trials");
  const double n = static_cast<double>(trials);
  const double p_hat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double center = p_hat + z2 / (2.0 * n);
  const double half = z * std::sqrt(p_hat * (1.0 - p_hat) / n + z2 / (4.0 * n * n));
  return (center - half) / (1.0 + z2 / n);
}

}  // namespace inferopt
