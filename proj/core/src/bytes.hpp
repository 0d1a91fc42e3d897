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

// Internal little-endian byte packing for model payloads.

#pragma once

#include <cstdint>
#include <cstring>
#include <vector>

#include "inferopt/error.hpp"

namespace inferopt::detail {

class ByteWriter {
 public:
  void u32(uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<uint8_t>((v >> (8 * i)) & 0xff));
  }
  void f64(double v) {
    uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<uint8_t>((bits >> (8 * i)) & 0xff));
  }
  void f64s(const std::vector<double>& vs) {
    u32(static_cast<uint32_t>(vs.size()));
    for (double v : vs) f64(v);
  }
  std::vector<uint8_t> take() { return std::move(bytes_); }

 private:
  std::vector<uint8_t> bytes_;
};

class ByteReader {
 public:
  explicit ByteReader(const std::vector<uint8_t>& bytes) : bytes_(bytes) {}

  uint32_t u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(bytes_[pos_++]) << (8 * i);
    return v;
  }
  double f64() {
    need(8);
    uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<uint64_t>(bytes_[pos_++]) << (8 * i);
    double v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
  }
  std::vector<double> f64s() {
    const uint32_t n = u32();
    std::vector<double> vs;
    vs.reserve(n);
    for (uint32_t i = 0; i < n; ++i) vs.push_back(f64());
    return vs;
  }
  void expect_end() const {
    if (pos_ != bytes_.size()) throw ParseError("trailing bytes in model payload");
  }

 private:
  void need(size_t n) const {
    if (pos_ + n > bytes_.size()) throw ParseError("truncated model payload");
  }
  const std::vector<uint8_t>& bytes_;
  size_t pos_ = 0;
};

}  // namespace inferopt::detail
