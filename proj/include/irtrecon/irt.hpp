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


#ifndef IRTRECON_IRT_HPP_
#define IRTRECON_IRT_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "irtrecon/error.hpp"
#include "irtrecon/response_matrix.hpp"
#include "irtrecon/types.hpp"

// Two-parameter logistic item response model fitted by marginal maximum
// likelihood. Item parameters come from an EM algorithm over a fixed
// quadrature grid for the standard normal ability prior; abilities are then
// the posterior modes given those items.
namespace irtrecon::irt {

inline constexpr double kScale = 1.7;
inline constexpr double kMinDiscrimination = 0.05;
inline constexpr double kMaxDiscrimination = 5.0;
inline constexpr double kMaxAbsLocation = 6.0;

struct ItemParameters {
  Vector discriminations;
  Vector difficulties;

  Index size() const { return discriminations.size(); }
};

struct IrtModel {
  Vector abilities;
  Vector discriminations;
  Vector difficulties;
  double scale = kScale;

  Index examinees() const { return abilities.size(); }
  Index items() const { return discriminations.size(); }
  // One ability per examinee plus two parameters per item.
  Index free_parameter_count() const { return examinees() + 2 * items(); }
};

struct QuadratureGrid {
  Vector nodes;
  Vector weights;

  Index size() const { return nodes.size(); }
};

struct EmConfig {
  int max_iterations = 200;
  // Stop when every |delta a_j| and |delta b_j| falls below this.
  double tolerance = 1e-4;
  int newton_max_iterations = 50;
  double newton_gradient_tolerance = 1e-8;
  // Weak priors b ~ N(0, 2^2), log a ~ N(0, 1) applied to every item.
  double difficulty_prior_sd = 2.0;
  double log_discrimination_prior_sd = 1.0;
};

struct FitReport {
  int iterations = 0;
  // Quadrature marginal log-likelihood at the returned item parameters.
  double log_likelihood = 0.0;
  // log_likelihood plus the item prior terms; the quantity EM ascends.
  double log_posterior = 0.0;
  bool converged = false;
  double max_change = 0.0;
  // log_posterior after each E-step, including the final evaluation.
  std::vector<double> trace;
};

namespace detail {

inline double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// log(1 / (1 + exp(-z))) without overflow.
inline double log_logistic(double z) {
  return z >= 0.0 ? -std::log1p(std::exp(-z)) : z - std::log1p(std::exp(z));
}

inline double open_unit(double p) {
  return std::clamp(p, std::numeric_limits<double>::denorm_min(), std::nextafter(1.0, 0.0));
}

inline double clamp_location(double v) {
  return std::clamp(v, -kMaxAbsLocation, kMaxAbsLocation);
}

inline double clamp_discrimination(double v) {
  return std::clamp(v, kMinDiscrimination, kMaxDiscrimination);
}

}  // namespace detail

// Probability of a correct answer, 1 / (1 + exp(-1.7 a (theta - b))), held
// inside the open interval where it would round to 0 or 1.
inline double irf(double theta, double a, double b) {
  if (!std::isfinite(theta) || !std::isfinite(a) || !std::isfinite(b)) {
    throw ParameterError("irf arguments must be finite");
  }
  if (!(a > 0.0)) throw ParameterError("discrimination must be positive");
  return detail::open_unit(detail::logistic(kScale * a * (theta - b)));
}

inline void check_model(const IrtModel& model) {
  if (model.discriminations.size() != model.difficulties.size()) {
    throw ShapeError("discrimination and difficulty vectors differ in length");
  }
  if (!model.abilities.allFinite() || !model.difficulties.allFinite() ||
      !model.discriminations.allFinite()) {
    throw ParameterError("model parameters must be finite");
  }
  if ((model.discriminations.array() <= 0.0).any()) {
    throw ParameterError("discriminations must be positive");
  }
}

// Sum over observed cells of delta log P + (1 - delta) log Q; delta may be
// fractional.
inline double log_likelihood(const ResponseMatrix& data, const IrtModel& model) {
  check_model(model);
  if (data.rows() != model.examinees() || data.cols() != model.items()) {
    throw ShapeError("matrix shape does not match model");
  }
  double total = 0.0;
  for (Index i = 0; i < data.rows(); ++i) {
    for (Index j = 0; j < data.cols(); ++j) {
      if (!data.observed(i, j)) continue;
      const double z = model.scale * model.discriminations(j) *
                       (model.abilities(i) - model.difficulties(j));
      const double d = data.value(i, j);
      total += d * detail::log_logistic(z) + (1.0 - d) * detail::log_logistic(-z);
    }
  }
  return total;
}

// Equally spaced nodes on [-span, span] with weights proportional to the
// standard normal density, normalized to sum to one.
inline QuadratureGrid standard_normal_grid(Index points = 31, double span = 4.0) {
  if (points < 3) throw ParameterError("quadrature needs at least 3 points");
  if (!(span > 0.0) || !std::isfinite(span)) {
    throw ParameterError("quadrature span must be positive and finite");
  }
  QuadratureGrid grid{Vector(points), Vector(points)};
  const double denom = static_cast<double>(points - 1);
  for (Index q = 0; q < points; ++q) {
    // Integer numerator keeps the nodes exactly symmetric.
    const double x = span * static_cast<double>(2 * q - (points - 1)) / denom;
    grid.nodes(q) = x;
    grid.weights(q) = std::exp(-0.5 * x * x);
  }
  grid.weights /= grid.weights.sum();
  return grid;
}

// Expected response counts for one item at each quadrature node, produced by
// the E-step: `correct` sums posterior weight times delta, `observed` sums
// posterior weight over examinees who saw the item.
struct ItemCounts {
  Vector correct;
  Vector observed;
};

// Expected complete-data log-likelihood of one item plus its log prior, as a
// function of (a, b).
class ItemObjective {
 public:
  ItemObjective(const QuadratureGrid& grid, const ItemCounts& counts,
                const EmConfig& config)
      : grid_(grid), counts_(counts), config_(config) {}

  double value(double a, double b) const {
    double total = log_prior(a, b);
    for (Index q = 0; q < grid_.size(); ++q) {
      const double z = kScale * a * (grid_.nodes(q) - b);
      const double r = counts_.correct(q);
      const double n = counts_.observed(q);
      total += r * detail::log_logistic(z) + (n - r) * detail::log_logistic(-z);
    }
    return total;
  }

  // d/da, d/db.
  std::array<double, 2> gradient(double a, double b) const {
    const double va = variance_log_a();
    const double vb = variance_b();
    std::array<double, 2> g{-std::log(a) / (va * a), -b / vb};
    for (Index q = 0; q < grid_.size(); ++q) {
      const double dx = grid_.nodes(q) - b;
      const double p = detail::logistic(kScale * a * dx);
      const double resid = counts_.correct(q) - counts_.observed(q) * p;
      g[0] += resid * kScale * dx;
      g[1] -= resid * kScale * a;
    }
    return g;
  }

  // Row-major 2x2 Hessian. Falls back to the expected-information form when
  // the observed Hessian is not negative definite.
  std::array<double, 4> hessian(double a, double b) const {
    const double va = variance_log_a();
    const double vb = variance_b();
    double haa = 0.0, hab = 0.0, hbb = -1.0 / vb, resid_sum = 0.0;
    for (Index q = 0; q < grid_.size(); ++q) {
      const double dx = grid_.nodes(q) - b;
      const double p = detail::logistic(kScale * a * dx);
      const double w = counts_.observed(q) * p * (1.0 - p);
      haa -= w * kScale * kScale * dx * dx;
      hab += w * kScale * kScale * a * dx;
      hbb -= w * kScale * kScale * a * a;
      resid_sum += counts_.correct(q) - counts_.observed(q) * p;
    }
    const double prior_aa = -(1.0 - std::log(a)) / (va * a * a);
    const double obs_aa = haa + prior_aa;
    const double obs_ab = hab - kScale * resid_sum;
    if (obs_aa < 0.0 && obs_aa * hbb - obs_ab * obs_ab > 0.0) {
      return {obs_aa, obs_ab, obs_ab, hbb};
    }
    return {haa - 1.0 / (va * a * a), hab, hab, hbb};
  }

 private:
  double variance_log_a() const {
    return config_.log_discrimination_prior_sd * config_.log_discrimination_prior_sd;
  }
  double variance_b() const {
    return config_.difficulty_prior_sd * config_.difficulty_prior_sd;
  }
  double log_prior(double a, double b) const {
    const double la = std::log(a);
    return -0.5 * la * la / variance_log_a() - 0.5 * b * b / variance_b();
  }

  const QuadratureGrid& grid_;
  const ItemCounts& counts_;
  const EmConfig& config_;
};

// Projected damped Newton ascent on one item's objective. Every accepted
// step does not decrease the objective.
inline std::pair<double, double> maximize_item(const ItemObjective& f, double a,
                                               double b, const EmConfig& config) {
  double current = f.value(a, b);
  for (int it = 0; it < config.newton_max_iterations; ++it) {
    const auto g = f.gradient(a, b);
    if (std::hypot(g[0], g[1]) < config.newton_gradient_tolerance) break;
    const auto h = f.hessian(a, b);
    const double det = h[0] * h[3] - h[1] * h[2];
    // Newton direction -H^{-1} g.
    const double da = -(h[3] * g[0] - h[1] * g[1]) / det;
    const double db = -(-h[2] * g[0] + h[0] * g[1]) / det;
    double step = 1.0;
    bool moved = false;
    for (int halving = 0; halving < 40; ++halving, step *= 0.5) {
      const double na = detail::clamp_discrimination(a + step * da);
      const double nb = detail::clamp_location(b + step * db);
      const double candidate = f.value(na, nb);
      if (candidate >= current) {
        moved = na != a || nb != b;
        a = na;
        b = nb;
        current = candidate;
        break;
      }
    }
    if (!moved) break;
  }
  return {a, b};
}

namespace detail {

inline void require_estimable(const ResponseMatrix& data) {
  const Mask& mask = data.mask();
  for (Index i = 0; i < data.rows(); ++i) {
    if (!mask.row(i).any()) {
      throw DegenerateDataError("degenerate data: examinee row " +
                                std::to_string(i) + " has no observed cells");
    }
  }
  for (Index j = 0; j < data.cols(); ++j) {
    if (!mask.col(j).any()) {
      throw DegenerateDataError("degenerate data: item column " +
                                std::to_string(j) + " has no observed cells");
    }
  }
}

struct EStep {
  double log_likelihood = 0.0;
  Matrix correct;   // nodes x items
  Matrix observed;  // nodes x items
};

inline EStep expectation(const Matrix& delta, const Matrix& indicator,
                         const QuadratureGrid& grid, const ItemParameters& items) {
  const Index nq = grid.size();
  const Index n = items.size();
  Matrix log_p(n, nq), log_q(n, nq);
  for (Index q = 0; q < nq; ++q) {
    for (Index j = 0; j < n; ++j) {
      const double z = kScale * items.discriminations(j) *
                       (grid.nodes(q) - items.difficulties(j));
      log_p(j, q) = log_logistic(z);
      log_q(j, q) = log_logistic(-z);
    }
  }
  // Per-examinee log-likelihood at each node: m x nq.
  Matrix log_post = delta * log_p + (indicator - delta) * log_q;
  const Vector log_w = grid.weights.array().log().matrix();

  EStep out;
  for (Index i = 0; i < log_post.rows(); ++i) {
    double top = -std::numeric_limits<double>::infinity();
    for (Index q = 0; q < nq; ++q) {
      log_post(i, q) += log_w(q);
      top = std::max(top, log_post(i, q));
    }
    double sum = 0.0;
    for (Index q = 0; q < nq; ++q) {
      log_post(i, q) = std::exp(log_post(i, q) - top);
      sum += log_post(i, q);
    }
    log_post.row(i) /= sum;
    out.log_likelihood += top + std::log(sum);
  }
  out.correct = log_post.transpose() * delta;
  out.observed = log_post.transpose() * indicator;
  return out;
}

inline double item_log_prior(const ItemParameters& items, const EmConfig& config) {
  const double va = config.log_discrimination_prior_sd * config.log_discrimination_prior_sd;
  const double vb = config.difficulty_prior_sd * config.difficulty_prior_sd;
  double total = 0.0;
  for (Index j = 0; j < items.size(); ++j) {
    const double la = std::log(items.discriminations(j));
    total -= 0.5 * la * la / va + 0.5 * items.difficulties(j) * items.difficulties(j) / vb;
  }
  return total;
}

// Observed values with nulls zeroed, so matrix products skip them.
inline Matrix masked_values(const ResponseMatrix& data) {
  return data.mask().select(data.values(), Matrix::Zero(data.rows(), data.cols()));
}

}  // namespace detail

// Start values: unit discrimination, difficulty from each item's observed
// proportion correct.
inline ItemParameters initial_items(const ResponseMatrix& data) {
  const Matrix delta = detail::masked_values(data);
  const Matrix indicator = data.indicator();
  ItemParameters items{Vector::Ones(data.cols()), Vector::Zero(data.cols())};
  for (Index j = 0; j < data.cols(); ++j) {
    const double seen = indicator.col(j).sum();
    const double p = seen > 0.0 ? delta.col(j).sum() / seen : 0.5;
    const double pc = std::clamp(p, 0.01, 0.99);
    items.difficulties(j) = detail::clamp_location(-std::log(pc / (1.0 - pc)) / kScale);
  }
  return items;
}

// Marginal maximum likelihood estimates of (a_j, b_j) by EM.
inline std::pair<ItemParameters, FitReport> fit_items_mml(
    const ResponseMatrix& data, const QuadratureGrid& grid,
    const EmConfig& config = {}) {
  detail::require_estimable(data);
  if (grid.size() < 3 || grid.weights.size() != grid.size()) {
    throw ParameterError("invalid quadrature grid");
  }
  if (config.max_iterations < 1) throw ParameterError("max_iterations must be >= 1");

  const Matrix delta = detail::masked_values(data);
  const Matrix indicator = data.indicator();
  ItemParameters items = initial_items(data);
  FitReport report;

  for (int it = 1; it <= config.max_iterations; ++it) {
    const auto e = detail::expectation(delta, indicator, grid, items);
    report.trace.push_back(e.log_likelihood + detail::item_log_prior(items, config));

    double max_change = 0.0;
    for (Index j = 0; j < items.size(); ++j) {
      const ItemCounts counts{e.correct.col(j), e.observed.col(j)};
      const ItemObjective objective(grid, counts, config);
      const auto [a, b] = maximize_item(objective, items.discriminations(j),
                                        items.difficulties(j), config);
      max_change = std::max({max_change, std::abs(a - items.discriminations(j)),
                             std::abs(b - items.difficulties(j))});
      items.discriminations(j) = a;
      items.difficulties(j) = b;
    }
    report.iterations = it;
    report.max_change = max_change;
    if (max_change < config.tolerance) {
      report.converged = true;
      break;
    }
  }

  const auto last = detail::expectation(delta, indicator, grid, items);
  report.log_likelihood = last.log_likelihood;
  report.log_posterior = last.log_likelihood + detail::item_log_prior(items, config);
  report.trace.push_back(report.log_posterior);
  return {std::move(items), std::move(report)};
}

// Posterior mode of one examinee's ability under a standard normal prior.
// Unobserved items are skipped.
inline double map_ability(const ResponseMatrix& data, Index row,
                          const ItemParameters& items) {
  auto objective = [&](double theta) {
    double total = -0.5 * theta * theta;
    for (Index j = 0; j < data.cols(); ++j) {
      if (!data.observed(row, j)) continue;
      const double z = kScale * items.discriminations(j) * (theta - items.difficulties(j));
      const double d = data.value(row, j);
      total += d * detail::log_logistic(z) + (1.0 - d) * detail::log_logistic(-z);
    }
    return total;
  };

  double theta = 0.0;
  double current = objective(theta);
  for (int it = 0; it < 100; ++it) {
    double g = -theta;
    double h = -1.0;
    for (Index j = 0; j < data.cols(); ++j) {
      if (!data.observed(row, j)) continue;
      const double slope = kScale * items.discriminations(j);
      const double p = detail::logistic(slope * (theta - items.difficulties(j)));
      g += slope * (data.value(row, j) - p);
      h -= slope * slope * p * (1.0 - p);
    }
    if (std::abs(g) < 1e-10) break;
    double step = -g / h;
    bool moved = false;
    for (int halving = 0; halving < 40; ++halving, step *= 0.5) {
      const double next = detail::clamp_location(theta + step);
      const double value = objective(next);
      if (value >= current) {
        moved = next != theta;
        theta = next;
        current = value;
        break;
      }
    }
    if (!moved) break;
  }
  return theta;
}

// MAP abilities for every examinee; rows with no observed cells get 0.
inline Vector estimate_abilities(const ResponseMatrix& data,
                                 const ItemParameters& items) {
  if (items.discriminations.size() != data.cols() ||
      items.difficulties.size() != data.cols()) {
    throw ShapeError("item parameter count does not match matrix columns");
  }
  if ((items.discriminations.array() <= 0.0).any() ||
      !items.discriminations.allFinite() || !items.difficulties.allFinite()) {
    throw ParameterError("invalid item parameters");
  }
  Vector theta(data.rows());
  for (Index i = 0; i < data.rows(); ++i) theta(i) = map_ability(data, i, items);
  return theta;
}

// Dense continuous reconstruction s_ij = P(theta_i; a_j, b_j).
inline ResponseMatrix reconstruct(const IrtModel& model) {
  check_model(model);
  Matrix s(model.examinees(), model.items());
  for (Index j = 0; j < model.items(); ++j) {
    for (Index i = 0; i < model.examinees(); ++i) {
      s(i, j) = detail::open_unit(detail::logistic(
          model.scale * model.discriminations(j) * (model.abilities(i) - model.difficulties(j))));
    }
  }
  return ResponseMatrix(std::move(s));
}

// Items by MML-EM, then abilities by MAP given the items.
inline std::pair<IrtModel, FitReport> fit(const ResponseMatrix& data,
                                          const QuadratureGrid& grid,
                                          const EmConfig& config = {}) {
  auto [items, report] = fit_items_mml(data, grid, config);
  IrtModel model;
  model.abilities = estimate_abilities(data, items);
  model.discriminations = std::move(items.discriminations);
  model.difficulties = std::move(items.difficulties);
  return {std::move(model), std::move(report)};
}

}  // namespace irtrecon::irt

#endif  // IRTRECON_IRT_HPP_
