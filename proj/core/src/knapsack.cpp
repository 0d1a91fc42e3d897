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

#include "inferopt/knapsack.hpp"

#include <algorithm>
#include <cmath>

#include "inferopt/error.hpp"

namespace inferopt {

namespace {

struct State {
  double cost = 0.0;
  double importance = 0.0;
  std::vector<int> selection;  // sorted group ids
};

bool better_tiebreak(const State& a, const State& b) {
  if (a.importance != b.importance) return a.importance > b.importance;
  if (a.cost != b.cost) return a.cost < b.cost;
  return a.selection < b.selection;
}

}  // namespace

std::set<int> select_feature_groups(const std::vector<FeatureGroup>& groups, double c_max) {
  if (c_max < 0.0) throw ValidationError("c_max must be non-negative");
  for (const FeatureGroup& g : groups) {
    if (!std::isfinite(g.importance) || !std::isfinite(g.cost_us) || g.cost_us < 0.0) {
      throw ValidationError("group " + std::to_string(g.id) + " has non-finite statistics");
    }
  }

  std::vector<const FeatureGroup*> items;
  for (const FeatureGroup& g : groups) items.push_back(&g);
  std::sort(items.begin(), items.end(),
            [](const FeatureGroup* a, const FeatureGroup* b) { return a->id < b->id; });

  std::vector<State> frontier{State{}};
  for (const FeatureGroup* g : items) {
    if (g->cost_us > c_max) continue;  // can never fit
    const double value = std::max(g->importance, 0.0);
    std::vector<State> merged;
    merged.reserve(frontier.size() * 2);
    for (const State& s : frontier) {
      merged.push_back(s);
      if (s.cost + g->cost_us <= c_max) {
        State t = s;
        t.cost += g->cost_us;
        t.importance += value;
        t.selection.push_back(g->id);
        merged.push_back(std::move(t));
      }
    }
    // Keep only Pareto-optimal states: sort by cost, sweep keeping strictly
    // increasing importance. For exact (cost, importance) ties the
    // tie-break order decides which state survives.
    std::sort(merged.begin(), merged.end(), [](const State& a, const State& b) {
      if (a.cost != b.cost) return a.cost < b.cost;
      return better_tiebreak(a, b);
    });
    std::vector<State> pruned;
    double best_importance = -1.0;
    for (State& s : merged) {
      if (s.importance > best_importance) {
        best_importance = s.importance;
        pruned.push_back(std::move(s));
      }
    }
    frontier = std::move(pruned);
  }

  const State* best = &frontier.front();
  for (const State& s : frontier) {
    if (better_tiebreak(s, *best)) best = &s;
  }
  return std::set<int>(best->selection.begin(), best->selection.end());
}

}  // namespace inferopt
