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


#ifndef IRTRECON_MATDEC_HPP_
#define IRTRECON_MATDEC_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "irtrecon/error.hpp"
#include "irtrecon/response_matrix.hpp"
#include "irtrecon/rng.hpp"
#include "irtrecon/types.hpp"

// Depth-k factorization R = U V^T fitted by full-batch gradient descent on
// the regularized squared error over observed cells:
//
//   W = sum_ij I(i,j) (a_ij - r_ij)^2 + k_u ||U||_F^2 + k_v ||V||_F^2
//
// Every u_il and v_jl is updated simultaneously from the epoch-start factors.
namespace irtrecon::matdec {

struct FactorPair {
  Matrix U;  // m x k
  Matrix V;  // n x k

  Index depth() const { return U.cols(); }
};

struct MatDecConfig {
  Index k = 1;
  // Unset means default_learning_rate() for the data being fitted.
  std::optional<double> learning_rate;
  double reg_u = 0.02;
  double reg_v = 0.02;
  int max_epochs = 20000;
  double tolerance = 1e-5;
  std::uint64_t seed = 0;
};

struct FitReport {
  int epochs = 0;
  double objective = 0.0;
  bool converged = false;
  double max_change = 0.0;
  // Epochs whose step raised W and were retried at half the learning rate.
  int step_reductions = 0;
  double learning_rate = 0.0;
  // W at initialization and after every accepted epoch.
  std::vector<double> trace;
};

// 0.002 on a complete matrix, scaled up by the inverse observed fraction.
inline double default_learning_rate(const ResponseMatrix& a) {
  const double cells = static_cast<double>(a.rows() * a.cols());
  return 0.002 * cells / static_cast<double>(std::max<Index>(1, a.observed_count()));
}

namespace detail {

inline void check_shapes(const ResponseMatrix& a, const FactorPair& f) {
  if (f.U.rows() != a.rows() || f.V.rows() != a.cols() || f.U.cols() != f.V.cols()) {
    throw ShapeError("factor shapes do not match the response matrix");
  }
}

// Observed values with nulls zeroed.
inline Matrix masked_values(const ResponseMatrix& a) {
  return a.mask().select(a.values(), Matrix::Zero(a.rows(), a.cols()));
}

// I(i,j) (a_ij - r_ij).
inline Matrix masked_residual(const Matrix& values, const Matrix& indicator,
                              const FactorPair& f) {
  return indicator.cwiseProduct(values - f.U * f.V.transpose());
}

inline double objective_from_residual(const Matrix& residual, const FactorPair& f,
                                      double reg_u, double reg_v) {
  return residual.squaredNorm() + reg_u * f.U.squaredNorm() + reg_v * f.V.squaredNorm();
}

}  // namespace detail

inline void validate(const MatDecConfig& config) {
  if (config.k < 1) throw ParameterError("depth k must be >= 1");
  if (config.learning_rate && !(*config.learning_rate > 0.0)) {
    throw ParameterError("learning rate must be positive");
  }
  if (!(config.reg_u >= 0.0) || !(config.reg_v >= 0.0)) {
    throw ParameterError("regularization coefficients must be non-negative");
  }
  if (config.max_epochs < 1) throw ParameterError("max_epochs must be >= 1");
  if (!(config.tolerance > 0.0)) throw ParameterError("tolerance must be positive");
}

inline double objective(const ResponseMatrix& a, const FactorPair& f, double reg_u,
                        double reg_v) {
  detail::check_shapes(a, f);
  const Matrix residual = detail::masked_residual(detail::masked_values(a), a.indicator(), f);
  return detail::objective_from_residual(residual, f, reg_u, reg_v);
}

// dW/dU = -2 (I o (A - UV^T)) V + 2 k_u U, and symmetrically for V.
inline FactorPair gradient(const ResponseMatrix& a, const FactorPair& f, double reg_u,
                           double reg_v) {
  detail::check_shapes(a, f);
  const Matrix residual = detail::masked_residual(detail::masked_values(a), a.indicator(), f);
  return {-2.0 * residual * f.V + 2.0 * reg_u * f.U,
          -2.0 * residual.transpose() * f.U + 2.0 * reg_v * f.V};
}

// One simultaneous descent update. `epoch` only labels the divergence error.
inline FactorPair gradient_step(const ResponseMatrix& a, const FactorPair& f,
                                double learning_rate, double reg_u, double reg_v,
                                std::size_t epoch = 0) {
  const FactorPair g = gradient(a, f, reg_u, reg_v);
  if (!g.U.allFinite() || !g.V.allFinite()) {
    throw DivergenceError("gradient became non-finite at epoch " + std::to_string(epoch) +
                              "; lower the learning rate",
                          epoch);
  }
  return {f.U - learning_rate * g.U, f.V - learning_rate * g.V};
}

inline FactorPair gradient_step(const ResponseMatrix& a, const FactorPair& f,
                                const MatDecConfig& config, std::size_t epoch = 0) {
  validate(config);
  const double mu = config.learning_rate.value_or(default_learning_rate(a));
  return gradient_step(a, f, mu, config.reg_u, config.reg_v, epoch);
}

// Entries uniform on [0, 1/sqrt(k)], U row-major first, then V.
inline FactorPair initial_factors(Index m, Index n, Index k, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  const double hi = 1.0 / std::sqrt(static_cast<double>(k));
  FactorPair f{Matrix(m, k), Matrix(n, k)};
  for (Index i = 0; i < m; ++i) {
    for (Index l = 0; l < k; ++l) f.U(i, l) = uniform(rng, 0.0, hi);
  }
  for (Index j = 0; j < n; ++j) {
    for (Index l = 0; l < k; ++l) f.V(j, l) = uniform(rng, 0.0, hi);
  }
  return f;
}

// Descends until the largest entry change drops below the tolerance or the
// epoch budget runs out. A step that would raise W is discarded and retried
// at half the learning rate, so the accepted W sequence never increases.
inline std::pair<FactorPair, FitReport> fit(const ResponseMatrix& a,
                                            const MatDecConfig& config) {
  validate(config);
  if (a.observed_count() == 0) {
    throw DegenerateDataError("degenerate data: matrix has no observed cells");
  }
  const Matrix values = detail::masked_values(a);
  const Matrix indicator = a.indicator();

  FitReport report;
  double mu = config.learning_rate.value_or(default_learning_rate(a));
  FactorPair f = initial_factors(a.rows(), a.cols(), config.k, config.seed);
  Matrix residual = detail::masked_residual(values, indicator, f);
  double w = detail::objective_from_residual(residual, f, config.reg_u, config.reg_v);
  report.trace.push_back(w);

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    const Matrix grad_u = -2.0 * residual * f.V + 2.0 * config.reg_u * f.U;
    const Matrix grad_v = -2.0 * residual.transpose() * f.U + 2.0 * config.reg_v * f.V;
    if (!grad_u.allFinite() || !grad_v.allFinite()) {
      throw DivergenceError("gradient became non-finite at epoch " +
                                std::to_string(epoch) + "; lower the learning rate",
                            static_cast<std::size_t>(epoch));
    }
    for (;;) {
      FactorPair next{f.U - mu * grad_u, f.V - mu * grad_v};
      Matrix next_residual = detail::masked_residual(values, indicator, next);
      const double next_w =
          detail::objective_from_residual(next_residual, next, config.reg_u, config.reg_v);
      if (std::isfinite(next_w) && next_w <= w) {
        report.max_change = std::max((next.U - f.U).cwiseAbs().maxCoeff(),
                                     (next.V - f.V).cwiseAbs().maxCoeff());
        f = std::move(next);
        residual = std::move(next_residual);
        w = next_w;
        report.trace.push_back(w);
        break;
      }
      mu *= 0.5;
      ++report.step_reductions;
      if (mu < 1e-300) {
        throw DivergenceError("no descent step found at epoch " + std::to_string(epoch),
                              static_cast<std::size_t>(epoch));
      }
    }
    report.epochs = epoch;
    if (report.max_change < config.tolerance) {
      report.converged = true;
      break;
    }
  }
  report.objective = w;
  report.learning_rate = mu;
  return {std::move(f), report};
}

// Dense U V^T, unclipped.
inline Matrix reconstruct(const FactorPair& f) { return f.U * f.V.transpose(); }

}  // namespace irtrecon::matdec

#endif  // IRTRECON_MATDEC_HPP_
