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


#include "irtrecon/svd.hpp"

#include <cmath>

#include <Eigen/SVD>
#include <gtest/gtest.h>

#include "irtrecon/metrics.hpp"
#include "irtrecon/synth.hpp"
#include "test_util.hpp"

namespace irtrecon::svd {
namespace {

using irtrecon::testing::random_matrix;
using irtrecon::testing::random_real;

double MaxAbs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

TEST(GramEigen, Identity) {
  const auto e = gram_eigen(Matrix::Identity(3, 3));
  EXPECT_TRUE(e.values.isApprox(Vector::Ones(3)));
}

TEST(GramEigen, DiagonalIsSorted) {
  Matrix d = Vector(Eigen::Vector3d(2, 5, 1)).asDiagonal();
  const auto e = gram_eigen(d);
  EXPECT_EQ(e.values(0), 5.0);
  EXPECT_EQ(e.values(1), 2.0);
  EXPECT_EQ(e.values(2), 1.0);
  EXPECT_EQ(e.vectors.col(0), Vector(Eigen::Vector3d(0, 1, 0)));
  EXPECT_EQ(e.vectors.col(1), Vector(Eigen::Vector3d(1, 0, 0)));
  EXPECT_EQ(e.vectors.col(2), Vector(Eigen::Vector3d(0, 0, 1)));
}

TEST(GramEigen, TwoByTwoHandSolved) {
  Matrix s(2, 2);
  s << 2, 1, 1, 2;
  const auto e = gram_eigen(s);
  EXPECT_NEAR(e.values(0), 3.0, 1e-14);
  EXPECT_NEAR(e.values(1), 1.0, 1e-14);
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(e.vectors(0, 0), r, 1e-14);
  EXPECT_NEAR(e.vectors(1, 0), r, 1e-14);
  EXPECT_NEAR(e.vectors(0, 1), r, 1e-14);
  EXPECT_NEAR(e.vectors(1, 1), -r, 1e-14);
}

TEST(GramEigen, RejectsAsymmetric) {
  Matrix s(2, 2);
  s << 1, 2, 0, 1;
  EXPECT_THROW(gram_eigen(s), ParameterError);
  EXPECT_THROW(gram_eigen(Matrix(2, 3)), ParameterError);
}

TEST(GramEigen, ResidualAndOrthonormality) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Matrix b = random_real(12, 9, seed);
    const Matrix s = b.transpose() * b;
    const auto e = gram_eigen(s);
    for (Index i = 0; i < s.rows(); ++i) {
      EXPECT_LE((s * e.vectors.col(i) - e.values(i) * e.vectors.col(i)).norm(), 1e-8 * s.norm());
      if (i > 0) {
        EXPECT_GE(e.values(i - 1), e.values(i));
      }
    }
    EXPECT_LE(MaxAbs(e.vectors.transpose() * e.vectors - Matrix::Identity(9, 9)), 1e-10);
  }
}

void ExpectValidFactors(const Matrix& a, const SvdFactors& f) {
  const Index r = f.rank();
  EXPECT_LE(MaxAbs(f.U.transpose() * f.U - Matrix::Identity(r, r)), 1e-8);
  EXPECT_LE(MaxAbs(f.V.transpose() * f.V - Matrix::Identity(r, r)), 1e-8);
  for (Index i = 1; i < r; ++i) EXPECT_GE(f.sigma(i - 1), f.sigma(i));
  EXPECT_LE((a - f.U * f.sigma.asDiagonal() * f.V.transpose()).norm(), 1e-8 * a.norm());
}

TEST(Decompose, RankOneOuterProduct) {
  Vector u = Vector::LinSpaced(5, 1, 5).normalized();
  Vector v = Vector(Eigen::Vector3d(2, -1, 0.5)).normalized();
  const Matrix a = u * v.transpose();
  const auto f = decompose(a);
  ASSERT_EQ(f.rank(), 1);
  EXPECT_NEAR(f.sigma(0), 1.0, 1e-12);
  const double sign = f.V(0, 0) > 0 ? 1.0 : -1.0;
  EXPECT_LE((f.V.col(0) - sign * v).norm(), 1e-10);
  EXPECT_LE((f.U.col(0) - sign * u).norm(), 1e-10);
}

TEST(Decompose, Identity) {
  const auto f = decompose(Matrix(Matrix::Identity(4, 4)));
  ASSERT_EQ(f.rank(), 4);
  EXPECT_LE((f.sigma - Vector::Ones(4)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Decompose, ExamSizedBinaryMatrix) {
  const auto sample = synth::generate({216, 31, 1});
  const auto f = decompose(sample.data);
  EXPECT_LE(f.rank(), 31);
  ExpectValidFactors(sample.data.values(), f);
}

TEST(Decompose, WideMatrixUsesRowGram) {
  const auto a = random_matrix(9, 23, 4);
  const auto f = decompose(a);
  EXPECT_LE(f.rank(), 9);
  ExpectValidFactors(a.values(), f);
}

TEST(Decompose, SignConvention) {
  const auto f = decompose(random_matrix(20, 8, 6));
  for (Index c = 0; c < f.rank(); ++c) {
    Index top = 0;
    f.V.col(c).cwiseAbs().maxCoeff(&top);
    EXPECT_GT(f.V(top, c), 0.0);
  }
}

TEST(Decompose, MatchesEigenOracleSingularValues) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto a = random_matrix(15 + seed, 10, seed);
    const auto f = decompose(a);
    Eigen::JacobiSVD<Matrix> oracle(a.values());
    for (Index i = 0; i < f.rank(); ++i) {
      EXPECT_NEAR(f.sigma(i), oracle.singularValues()(i), 1e-10);
    }
  }
}

TEST(Decompose, TwoByTwoClosedForm) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const Matrix a = random_real(2, 2, seed);
    const Matrix g = a.transpose() * a;
    const double mid = 0.5 * (g(0, 0) + g(1, 1));
    const double rad = std::sqrt(0.25 * (g(0, 0) - g(1, 1)) * (g(0, 0) - g(1, 1)) + g(0, 1) * g(0, 1));
    const auto f = decompose(a);
    ASSERT_EQ(f.rank(), 2);
    EXPECT_NEAR(f.sigma(0), std::sqrt(mid + rad), 1e-12);
    EXPECT_NEAR(f.sigma(1), std::sqrt(mid - rad), 1e-12);
  }
}

TEST(Decompose, IncompleteMatrixPointsToMatdec) {
  try {
    decompose(parse_csv("1,,0\n0,1,1\n"));
    FAIL() << "expected IncompleteMatrixError";
  } catch (const IncompleteMatrixError& e) {
    EXPECT_NE(std::string(e.what()).find("matdec"), std::string::npos);
  }
}

TEST(Decompose, ZeroMatrixHasRankZero) {
  const auto f = decompose(Matrix(Matrix::Zero(3, 2)));
  EXPECT_EQ(f.rank(), 0);
  EXPECT_EQ(truncate(f, 1), Matrix::Zero(3, 2));
}

TEST(Truncate, FullRankIsExact) {
  const auto a = random_matrix(40, 12, 8);
  const auto f = decompose(a);
  EXPECT_LE(metrics::rmse(a, truncate(f, f.rank())), 1e-8);
  EXPECT_LE(metrics::rmse(a, truncate(f, 1000)), 1e-8);
}

TEST(Truncate, RankOneExact) {
  Matrix a = Vector::LinSpaced(4, 0.1, 0.4) * Vector::LinSpaced(3, 1, 2).transpose();
  EXPECT_LE((truncate(decompose(a), 1) - a).norm(), 1e-12);
}

TEST(Truncate, EckartYoungResidual) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto a = random_matrix(30, 10 + seed, seed);
    const auto f = decompose(a);
    for (Index k = 1; k <= f.rank(); ++k) {
      EXPECT_NEAR((a.values() - truncate(f, k)).norm(), tail_energy(f, k), 1e-8);
    }
  }
}

TEST(Truncate, BeatsRandomLowRankMatrices) {
  const auto a = random_matrix(8, 5, 77);
  const auto f = decompose(a);
  for (Index k = 1; k <= 4; ++k) {
    const double best = (a.values() - truncate(f, k)).norm();
    for (std::uint64_t t = 0; t < 50; ++t) {
      const Matrix b = random_real(8, k, 1000 * k + t) * random_real(k, 5, 5000 * k + t);
      EXPECT_LE(best, (a.values() - b).norm() + 1e-10);
    }
  }
}

TEST(Truncate, RmseMonotoneInRank) {
  const auto a = random_matrix(25, 9, 3);
  const auto f = decompose(a);
  for (Index k = 1; k < f.rank(); ++k) {
    EXPECT_LE(metrics::rmse(a, truncate(f, k + 1)), metrics::rmse(a, truncate(f, k)) + 1e-12);
  }
}

TEST(Truncate, RejectsZeroRank) {
  EXPECT_THROW(truncate(decompose(random_matrix(3, 3, 1)), 0), ParameterError);
}

}  // namespace
}  // namespace irtrecon::svd
