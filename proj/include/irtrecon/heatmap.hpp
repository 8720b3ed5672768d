// Copyright 2026 The irtrecon Authors. All Rights Reserved.
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


#ifndef IRTRECON_HEATMAP_HPP_
#define IRTRECON_HEATMAP_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "irtrecon/types.hpp"

namespace irtrecon {

inline constexpr std::uint8_t kNullPixel = 64;

// One 8-bit gray pixel per cell, rows are examinees. Present values map to
// round(255 v) after clamping to [0,1]; null cells get kNullPixel.
inline std::vector<std::uint8_t> heatmap_pixels(const Matrix& values, const Mask& observed) {
  std::vector<std::uint8_t> px;
  px.reserve(static_cast<std::size_t>(values.size()));
  for (Index i = 0; i < values.rows(); ++i) {
    for (Index j = 0; j < values.cols(); ++j) {
      if (!observed(i, j)) {
        px.push_back(kNullPixel);
        continue;
      }
      const double v = std::clamp(values(i, j), 0.0, 1.0);
      px.push_back(static_cast<std::uint8_t>(std::lround(255.0 * v)));
    }
  }
  return px;
}

// Binary portable graymap (P5): width = columns, height = rows.
inline void write_pgm(std::ostream& out, const Matrix& values, const Mask& observed) {
  out << "P5\n" << values.cols() << ' ' << values.rows() << "\n255\n";
  const auto px = heatmap_pixels(values, observed);
  out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
}

inline void write_pgm(std::ostream& out, const Matrix& values) {
  write_pgm(out, values, Mask::Constant(values.rows(), values.cols(), true));
}

}  // namespace irtrecon

#endif  // IRTRECON_HEATMAP_HPP_
