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

#include <set>
#include <vector>

#include "inferopt/feature_groups.hpp"

namespace inferopt {

/// 0/1 knapsack over feature groups: returns the set S maximizing the summed
/// importance subject to the summed standalone group costs <= c_max.
/// Negative importances are clamped to 0 for selection. Solved by dynamic
/// programming over the (cost, importance) Pareto frontier, which is exact
/// for real-valued costs. Ties break toward higher importance, then lower
/// cost, then the lexicographically smallest id set, so results are
/// deterministic.
std::set<int> select_feature_groups(const std::vector<FeatureGroup>& groups, double c_max);

}  // namespace inferopt
