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


#ifndef IRTRECON_SVD_HPP_
#define IRTRECON_SVD_HPP_

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include "irtrecon/error.hpp"
#include "irtrecon/response_matrix.hpp"
#include "irtrecon/types.hpp"

namespace irtrecon::svd {

struct SymmetricEigen {
  Vector values;   // descending, non-negative
  Matrix vectors;  // orthonormal columns matching `values`
};

// A = U diag(sigma) V^T with the numerically zero components dropped.
struct SvdFactors {
  Matrix U;      // m x r
  Vector sigma;  // r, non-increasing, positive
  Matrix V;      // n x r

  Index rank() const { return sigma.size(); }
  Index rows() const { return U.rows(); }
  Index cols() const { return V.rows(); }
};

namespace detail {

// Flip each column so its largest-magnitude entry (first on ties) is positive.
inline Vector canonical_signs(const Matrix& vectors) {
  Vector signs = Vector::Ones(vectors.cols());
  for (Index c = 0; c < vectors.cols(); ++c) {
    Index top = 0;
    for (Index r = 1; r < vectors.rows(); ++r) {
      if (std::abs(vectors(r, c)) > std::abs(vectors(top, c))) top = r;
    }
    if (vectors.rows() > 0 && vectors(top, c) < 0.0) signs(c) = -1.0;
  }
  return signs;
}

}  // namespace detail

// Cyclic Jacobi eigendecomposition of a symmetric matrix. Sweeps until every
// off-diagonal entry is below 1e-12 * ||S||_F. Negative eigenvalues (round-off
// on a PSD Gram matrix) are clamped to zero.
inline SymmetricEigen gram_eigen(const Matrix& s) {
  if (s.rows() != s.cols() || s.rows() < 1) {
    throw ParameterError("gram_eigen expects a non-empty square matrix");
  }
  const Index p = s.rows();
  const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  if (((s - s.transpose()).cwiseAbs().array() > 1e-10 * scale).any()) {
    throw ParameterError("gram_eigen expects a symmetric matrix");
  }

  Matrix a = 0.5 * (s + s.transpose());
  Matrix v = Matrix::Identity(p, p);
  const double threshold = 1e-12 * a.norm();

  auto off_max = [&] {
    double m = 0.0;
    for (Index j = 1; j < p; ++j) {
      for (Index i = 0; i < j; ++i) m = std::max(m, std::abs(a(i, j)));
    }
    return m;
  };

  for (int sweep = 0; sweep < 100 && off_max() >= threshold && threshold > 0.0; ++sweep) {
    for (Index pi = 0; pi < p - 1; ++pi) {
      for (Index qi = pi + 1; qi < p; ++qi) {
        const double apq = a(pi, qi);
        if (apq == 0.0) continue;
        const double app = a(pi, pi);
        const double aqq = a(qi, qi);
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (Index k = 0; k < p; ++k) {
          if (k == pi || k == qi) continue;
          const double akp = a(k, pi);
          const double akq = a(k, qi);
          a(k, pi) = a(pi, k) = c * akp - sn * akq;
          a(k, qi) = a(qi, k) = sn * akp + c * akq;
        }
        a(pi, pi) = app - t * apq;
        a(qi, qi) = aqq + t * apq;
        a(pi, qi) = a(qi, pi) = 0.0;
        for (Index k = 0; k < p; ++k) {
          const double vkp = v(k, pi);
          const double vkq = v(k, qi);
          v(k, pi) = c * vkp - sn * vkq;
          v(k, qi) = sn * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Index> order(static_cast<std::size_t>(p));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index x, Index y) { return a(x, x) > a(y, y); });

  SymmetricEigen out{Vector(p), Matrix(p, p)};
  for (Index k = 0; k < p; ++k) {
    const Index src = order[static_cast<std::size_t>(k)];
    out.values(k) = std::max(0.0, a(src, src));
    out.vectors.col(k) = v.col(src);
  }
  out.vectors = out.vectors * detail::canonical_signs(out.vectors).asDiagonal();
  return out;
}

// Relative cutoff below which a singular value counts as zero.
inline constexpr double kRankTolerance = 1e-10;

// SVD through the eigendecomposition of the smaller Gram matrix: for
// n <= m, A^T A v = xi v, sigma = sqrt(xi), u = A v / sigma (and the
// transposed construction otherwise). Right vectors follow the
// largest-entry-positive sign convention.
inline SvdFactors decompose(const Matrix& a) {
  const Index m = a.rows();
  const Index n = a.cols();
  if (m < 1 || n < 1) throw EmptyInputError("svd of an empty matrix");
  if (!a.allFinite()) throw ParameterError("svd input must be finite");

  const bool right_side = n <= m;
  const Matrix gram = right_side ? Matrix(a.transpose() * a) : Matrix(a * a.transpose());
  const SymmetricEigen eig = gram_eigen(gram);

  const double top = std::sqrt(eig.values(0));
  Index r = 0;
  while (r < eig.values.size() && top > 0.0 &&
         std::sqrt(eig.values(r)) > kRankTolerance * top) {
    ++r;
  }

  SvdFactors f;
  f.sigma = eig.values.head(r).cwiseSqrt();
  const Vector inv_sigma = f.sigma.cwiseInverse();
  if (right_side) {
    f.V = eig.vectors.leftCols(r);
    f.U = a * f.V * inv_sigma.asDiagonal();
  } else {
    f.U = eig.vectors.leftCols(r);
    f.V = a.transpose() * f.U * inv_sigma.asDiagonal();
  }
  const Vector signs = detail::canonical_signs(f.V);
  f.V = f.V * signs.asDiagonal();
  f.U = f.U * signs.asDiagonal();
  return f;
}

// SVD requires every cell; incomplete matrices go through matrix
// factorization instead.
inline SvdFactors decompose(const ResponseMatrix& a) {
  if (!a.complete()) {
    throw IncompleteMatrixError(
        "svd requires a complete matrix (" +
        std::to_string(a.rows() * a.cols() - a.observed_count()) +
        " null cells); use matdec for incomplete matrices");
  }
  return decompose(a.values());
}

// A_k = sum_{l<=k} sigma_l u_l v_l^T, with k capped at the rank. Unclipped.
inline Matrix truncate(const SvdFactors& f, Index k) {
  if (k < 1) throw ParameterError("truncation rank must be >= 1");
  const Index kk = std::min(k, f.rank());
  return f.U.leftCols(kk) * f.sigma.head(kk).asDiagonal() * f.V.leftCols(kk).transpose();
}

// (sum_{l>k} sigma_l^2)^{1/2}: the Frobenius residual of the rank-k truncation.
inline double tail_energy(const SvdFactors& f, Index k) {
  const Index kk = std::clamp<Index>(k, 0, f.rank());
  return std::sqrt(f.sigma.tail(f.rank() - kk).squaredNorm());
}

}  // namespace irtrecon::svd

#endif  // IRTRECON_SVD_HPP_
