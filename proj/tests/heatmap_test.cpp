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


#include "irtrecon/heatmap.hpp"

#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace irtrecon {
namespace {

TEST(Heatmap, PixelValues) {
  Matrix m(2, 2);
  m << 1, 0, 0, 1;
  const auto px = heatmap_pixels(m, Mask::Constant(2, 2, true));
  EXPECT_EQ(px, (std::vector<std::uint8_t>{255, 0, 0, 255}));
}

TEST(Heatmap, NullAndClampedCells) {
  Matrix m(1, 4);
  m << 0.5, -0.2, 1.4, 0.0;
  Mask obs(1, 4);
  obs << true, true, true, false;
  const auto px = heatmap_pixels(m, obs);
  EXPECT_EQ(px, (std::vector<std::uint8_t>{128, 0, 255, kNullPixel}));
}

TEST(Heatmap, PgmLayout) {
  Matrix m = Matrix::Constant(3, 5, 1.0);
  std::ostringstream out;
  write_pgm(out, m);
  const std::string s = out.str();
  const std::string header = "P5\n5 3\n255\n";
  ASSERT_EQ(s.size(), header.size() + 15);
  EXPECT_EQ(s.substr(0, header.size()), header);
  EXPECT_EQ(static_cast<unsigned char>(s.back()), 255);
}

}  // namespace
}  // namespace irtrecon
