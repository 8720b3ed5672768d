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


#include "irtrecon/response_matrix.hpp"

#include <sstream>

#include <gtest/gtest.h>

#include "irtrecon/rng.hpp"

namespace irtrecon {
namespace {

ResponseMatrix RandomMatrix(Index m, Index n, std::uint64_t seed, bool binary,
                            double null_fraction) {
  Rng rng = make_rng(seed);
  Matrix v(m, n);
  Mask obs(m, n);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) {
      v(i, j) = binary ? (uniform01(rng) < 0.5 ? 0.0 : 1.0) : uniform01(rng);
      obs(i, j) = uniform01(rng) >= null_fraction;
    }
  }
  return ResponseMatrix(v, obs);
}

TEST(LoadCsv, ParsesCompleteMatrix) {
  const auto m = parse_csv("1,0\n0,1");
  ASSERT_EQ(m.rows(), 2);
  ASSERT_EQ(m.cols(), 2);
  EXPECT_TRUE(m.complete());
  EXPECT_EQ(m.value(0, 0), 1.0);
  EXPECT_EQ(m.value(0, 1), 0.0);
  EXPECT_EQ(m.value(1, 0), 0.0);
  EXPECT_EQ(m.value(1, 1), 1.0);
}

TEST(LoadCsv, EmptyCellIsNull) {
  const auto m = parse_csv("1,,0");
  ASSERT_EQ(m.rows(), 1);
  ASSERT_EQ(m.cols(), 3);
  EXPECT_FALSE(m.at(0, 1).has_value());
  EXPECT_EQ(m.at(0, 2), 0.0);
  EXPECT_EQ(m.observed_count(), 2);
}

TEST(LoadCsv, RaggedRowNamesLine) {
  try {
    parse_csv("1,0\n0");
    FAIL() << "expected StructuralError";
  } catch (const StructuralError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(LoadCsv, OutOfRangeValueReportsCell) {
  try {
    parse_csv("0,1\n1,1.5\n");
    FAIL() << "expected ValueError";
  } catch (const ValueError& e) {
    EXPECT_EQ(e.row(), 1u);
    EXPECT_EQ(e.col(), 1u);
  }
  EXPECT_THROW(parse_csv("0,x\n"), ValueError);
  EXPECT_THROW(parse_csv("0,-0.1\n"), ValueError);
  EXPECT_THROW(parse_csv("nan\n"), ValueError);
}

TEST(LoadCsv, EmptyInput) {
  EXPECT_THROW(parse_csv(""), EmptyInputError);
  EXPECT_THROW(parse_csv("\n"), EmptyInputError);
}

TEST(LoadCsv, AcceptsContinuousAndCrlf) {
  const auto m = parse_csv("0.25,1\r\n0.5,\r\n");
  EXPECT_EQ(m.value(0, 0), 0.25);
  EXPECT_FALSE(m.observed(1, 1));
}

TEST(SaveCsv, Formats) {
  EXPECT_EQ(to_csv(parse_csv("1,0\n0,1")), "1,0\n0,1\n");
  EXPECT_EQ(to_csv(parse_csv("1,,0")), "1,,0\n");
}

TEST(SaveCsv, RoundTripProperty) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const bool binary = seed % 2 == 0;
    const auto m = RandomMatrix(1 + seed % 7, 1 + seed % 5, seed, binary, 0.2);
    if (m.observed_count() == 0) continue;
    EXPECT_EQ(parse_csv(to_csv(m)), m) << "seed " << seed;
    std::istringstream in(to_csv(m));
    EXPECT_EQ(load_csv(in), m);
  }
}

TEST(ResponseMatrix, EqualityIgnoresNullStorage) {
  Matrix a(1, 2), b(1, 2);
  a << 1, 0.3;
  b << 1, 0.9;
  Mask mask(1, 2);
  mask << true, false;
  EXPECT_EQ(ResponseMatrix(a, mask), ResponseMatrix(b, mask));
}

TEST(MaskRandom, ZeroRatioIsIdentity) {
  const auto m = RandomMatrix(5, 4, 3, true, 0.0);
  EXPECT_EQ(mask_random(m, 0.0, 9), m);
}

TEST(MaskRandom, ExactNullCount) {
  const auto m = RandomMatrix(216, 31, 11, true, 0.0);
  const auto masked = mask_random(m, 0.1, 42);
  EXPECT_EQ(m.rows() * m.cols() - masked.observed_count(), 670);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (masked.observed(i, j)) {
        EXPECT_EQ(masked.value(i, j), m.value(i, j));
      }
    }
  }
}

TEST(MaskRandom, DeterministicPerSeed) {
  const auto m = RandomMatrix(30, 10, 5, true, 0.0);
  EXPECT_EQ(mask_random(m, 0.3, 7), mask_random(m, 0.3, 7));
  EXPECT_FALSE(mask_random(m, 0.3, 7) == mask_random(m, 0.3, 8));
}

TEST(MaskRandom, NullCountPropertyAcrossRatios) {
  const auto m = RandomMatrix(17, 13, 2, false, 0.0);
  for (double ratio : {0.0, 0.01, 0.1, 0.25, 0.5, 0.9, 0.999}) {
    const auto masked = mask_random(m, ratio, 3);
    EXPECT_EQ(m.rows() * m.cols() - masked.observed_count(),
              static_cast<Index>(std::llround(ratio * 17 * 13)));
  }
}

TEST(MaskRandom, RejectsBadInput) {
  const auto m = RandomMatrix(4, 4, 1, true, 0.0);
  EXPECT_THROW(mask_random(m, 1.0, 1), ParameterError);
  EXPECT_THROW(mask_random(m, -0.1, 1), ParameterError);
  EXPECT_THROW(mask_random(parse_csv("1,,0"), 0.1, 1), ParameterError);
}

TEST(Binarize, ThresholdRules) {
  const auto t = binarize(parse_csv("0.5,0.49,,1,0"));
  EXPECT_EQ(t.value(0, 0), 1.0);
  EXPECT_EQ(t.value(0, 1), 0.0);
  EXPECT_FALSE(t.observed(0, 2));
  EXPECT_EQ(t.value(0, 3), 1.0);
  EXPECT_EQ(t.value(0, 4), 0.0);
  EXPECT_THROW(binarize(parse_csv("1"), 1.5), ParameterError);
}

TEST(Binarize, IdempotentAndMaskPreserving) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto m = RandomMatrix(6, 5, seed, false, 0.3);
    const auto once = binarize(m);
    EXPECT_EQ(binarize(once.matrix()), once);
    EXPECT_TRUE((once.matrix().mask() == m.mask()).all());
  }
}

TEST(Binarize, DenseRealInput) {
  Matrix s(1, 4);
  s << -0.2, 0.5, 1.3, 0.4999;
  const auto t = binarize(s);
  EXPECT_EQ(t.value(0, 0), 0.0);
  EXPECT_EQ(t.value(0, 1), 1.0);
  EXPECT_EQ(t.value(0, 2), 1.0);
  EXPECT_EQ(t.value(0, 3), 0.0);
}

TEST(DiscreteResponseMatrix, RejectsNonBinary) {
  EXPECT_THROW(DiscreteResponseMatrix(parse_csv("0.5")), ValueError);
}

}  // namespace
}  // namespace irtrecon
