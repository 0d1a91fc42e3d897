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

#include <algorithm>
#include <cmath>
#include <map>

#include "inferopt/dataset.hpp"
#include "inferopt/error.hpp"
#include "inferopt/rng.hpp"

namespace inferopt {

namespace {
constexpr size_t kMaxStratifyClasses = 10;
}

std::pair<Dataset, Dataset> train_holdout_split(const Dataset& d, double holdout_fraction,
                                                uint64_t seed) {
  if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0)) {
    throw ValidationError("holdout_fraction must be in (0, 1)");
  }
  if (d.row_count < 2) throw ValidationError("dataset must have at least 2 rows to split");

  const size_t holdout_total =
      static_cast<size_t>(std::llround(holdout_fraction * static_cast<double>(d.row_count)));
  if (holdout_total == 0 || holdout_total == d.row_count) {
    throw ValidationError("holdout_fraction leaves one side of the split empty");
  }

  std::map<double, std::vector<size_t>> by_class;
  for (size_t r = 0; r < d.row_count; ++r) by_class[d.labels[r]].push_back(r);

  Rng rng(seed);
  std::vector<size_t> holdout_rows;
  std::vector<size_t> train_rows;

  if (by_class.size() <= kMaxStratifyClasses) {
    // Stratified: per-class quotas by largest remainder so the holdout total
    // is exactly round(fraction * n).
    struct Quota {
      double label;
      size_t count;
      size_t take;
      double remainder;
    };
    std::vector<Quota> quotas;
    size_t allocated = 0;
    for (const auto& [label, rows] : by_class) {
      const double exact = holdout_fraction * static_cast<double>(rows.size());
      const size_t base = static_cast<size_t>(std::floor(exact));
      quotas.push_back({label, rows.size(), base, exact - static_cast<double>(base)});
      allocated += base;
    }
    std::vector<size_t> order(quotas.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      return quotas[a].remainder > quotas[b].remainder;
    });
    for (size_t i = 0; allocated < holdout_total && i < order.size(); ++i) {
      ++quotas[order[i]].take;
      ++allocated;
    }
    if (allocated != holdout_total) {
      throw ValidationError("internal: holdout quota allocation failed");
    }

    for (const Quota& q : quotas) {
      if (q.take == 0 || q.take == q.count) {
        throw ValidationError("degenerate dataset: label " + std::to_string(q.label) +
                              " would be absent from one side of the split");
      }
    }

    for (const Quota& q : quotas) {
      std::vector<size_t> rows = by_class.at(q.label);
      rng.shuffle(rows);
      for (size_t i = 0; i < rows.size(); ++i) {
        (i < q.take ? holdout_rows : train_rows).push_back(rows[i]);
      }
    }
  } else {
    // Too many distinct labels to treat as classes (e.g. regression targets).
    std::vector<size_t> rows = rng.permutation(d.row_count);
    holdout_rows.assign(rows.begin(), rows.begin() + static_cast<ptrdiff_t>(holdout_total));
    train_rows.assign(rows.begin() + static_cast<ptrdiff_t>(holdout_total), rows.end());
  }

  std::sort(holdout_rows.begin(), holdout_rows.end());
  std::sort(train_rows.begin(), train_rows.end());
  return {d.take_rows(train_rows), d.take_rows(holdout_rows)};
}

}  // namespace inferopt
