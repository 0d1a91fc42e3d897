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
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "inferopt/matrix.hpp"

namespace inferopt {

/// Column store of numeric feature vectors plus a label vector.
/// All columns and labels have length row_count; NaN/Inf are rejected at
/// construction. Immutable by convention after load.
struct Dataset {
  std::map<std::string, std::vector<double>> columns;
  std::vector<double> labels;
  size_t row_count = 0;

  /// Feature column ids in canonical (lexicographic) order.
  std::vector<std::string> column_ids() const;

  bool has_column(const std::string& id) const { return columns.count(id) > 0; }

  /// Checks lengths and finiteness; throws ValidationError.
  void validate() const;

  /// New dataset with the given rows (in the given order).
  Dataset take_rows(const std::vector<size_t>& rows) const;
};

/// Parses a CSV document with a header row. One column must be named
/// `label`; every other column is a feature column keyed by header name.
/// Values are parsed as 64-bit floats. Throws ParseError / ValidationError.
Dataset load_dataset_csv(const std::string& csv_text);

/// Matrix with row_count rows and the requested columns in order.
Matrix project(const Dataset& d, const std::vector<std::string>& cols);

/// Row-disjoint (train, holdout) partition. The holdout gets
/// round(holdout_fraction * row_count) rows, allocated per label class by
/// largest remainder when the labels look categorical (<= 10 distinct
/// values), plain otherwise. Deterministic in `seed`. Throws
/// ValidationError if a class would be absent from either part.
std::pair<Dataset, Dataset> train_holdout_split(const Dataset& d, double holdout_fraction,
                                                uint64_t seed);

}  // namespace inferopt
