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

namespace inferopt {

/// Two-sided 95% standard normal quantile.
inline constexpr double kZ95 = 1.959963984540054;

/// Lower bound of the Wilson score interval for a binomial proportion with
/// `successes` out of `trials` and normal quantile z. trials must be > 0.
double wilson_lower_bound(uint64_t successes, uint64_t trials, double z = kZ95);

}  // namespace inferopt
