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

#include "inferopt/dataset.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "inferopt/error.hpp"

namespace inferopt {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  fields.push_back(field);
  return fields;
}

double parse_double(const std::string& s, size_t line_no) {
  double value = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ParseError("line " + std::to_string(line_no) + ": cannot parse '" + s + "' as a number");
  }
  return value;
}

}  // namespace

std::vector<std::string> Dataset::column_ids() const {
  std::vector<std::string> ids;
  ids.reserve(columns.size());
  for (const auto& [id, _] : columns) ids.push_back(id);
  return ids;
}

void Dataset::validate() const {
  if (labels.size() != row_count) {
    throw ValidationError("labels length " + std::to_string(labels.size()) +
                          " != row_count " + std::to_string(row_count));
  }
  for (const auto& [id, col] : columns) {
    if (col.size() != row_count) {
      throw ValidationError("column '" + id + "' length " + std::to_string(col.size()) +
                            " != row_count " + std::to_string(row_count));
    }
    for (double v : col) {
      if (!std::isfinite(v)) throw ValidationError("non-finite value in column '" + id + "'");
    }
  }
  for (double v : labels) {
    if (!std::isfinite(v)) throw ValidationError("non-finite label value");
  }
}

Dataset Dataset::take_rows(const std::vector<size_t>& rows) const {
  Dataset out;
  out.row_count = rows.size();
  out.labels.reserve(rows.size());
  for (size_t r : rows) out.labels.push_back(labels[r]);
  for (const auto& [id, col] : columns) {
    std::vector<double> sub;
    sub.reserve(rows.size());
    for (size_t r : rows) sub.push_back(col[r]);
    out.columns.emplace(id, std::move(sub));
  }
  return out;
}

Dataset load_dataset_csv(const std::string& csv_text) {
  std::istringstream in(csv_text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty CSV document");

  const std::vector<std::string> header = split_csv_line(line);
  int label_idx = -1;
  for (size_t i = 0; i < header.size(); ++i) {
    if (header[i].empty()) throw ParseError("empty column name in CSV header");
    if (header[i] == "label") {
      if (label_idx >= 0) throw ParseError("multiple 'label' columns");
      label_idx = static_cast<int>(i);
    }
  }
  if (label_idx < 0) throw ParseError("CSV header has no 'label' column");

  Dataset d;
  std::vector<std::vector<double>*> slots(header.size(), nullptr);
  for (size_t i = 0; i < header.size(); ++i) {
    if (static_cast<int>(i) == label_idx) continue;
    auto [it, inserted] = d.columns.emplace(header[i], std::vector<double>{});
    if (!inserted) throw ParseError("duplicate column name '" + header[i] + "'");
    slots[i] = &it->second;
  }

  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(header.size()) + " fields, got " +
                       std::to_string(fields.size()));
    }
    for (size_t i = 0; i < fields.size(); ++i) {
      const double v = parse_double(fields[i], line_no);
      if (static_cast<int>(i) == label_idx) {
        d.labels.push_back(v);
      } else {
        slots[i]->push_back(v);
      }
    }
    ++d.row_count;
  }
  d.validate();
  return d;
}

Matrix project(const Dataset& d, const std::vector<std::string>& cols) {
  Matrix m(d.row_count, cols.size());
  for (size_t c = 0; c < cols.size(); ++c) {
    auto it = d.columns.find(cols[c]);
    if (it == d.columns.end()) throw ValidationError("unknown column '" + cols[c] + "'");
    const std::vector<double>& col = it->second;
    for (size_t r = 0; r < d.row_count; ++r) m.at(r, c) = col[r];
  }
  return m;
}

}  // namespace inferopt
