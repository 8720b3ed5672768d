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


#ifndef IRTRECON_TESTS_TEST_UTIL_HPP_
#define IRTRECON_TESTS_TEST_UTIL_HPP_

#include <cmath>
#include <algorithm>
#include <cstdint>

#include "irtrecon/response_matrix.hpp"
#include "irtrecon/rng.hpp"
#include "irtrecon/types.hpp"

namespace irtrecon::testing {

inline double pearson(const Vector& x, const Vector& y) {
  const double mx = x.mean();
  const double my = y.mean();
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    sxy += (x(i) - mx) * (y(i) - my);
    sxx += (x(i) - mx) * (x(i) - mx);
    syy += (y(i) - my) * (y(i) - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

// Uniform 0/1 (or [0,1]) cells with each cell null with probability
// `null_fraction`.
inline ResponseMatrix random_matrix(Index m, Index n, std::uint64_t seed, bool binary = true,
                                    double null_fraction = 0.0) {
  Rng rng = make_rng(seed);
  Matrix v(m, n);
  Mask obs(m, n);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) {
      v(i, j) = binary ? (uniform01(rng) < 0.5 ? 0.0 : 1.0) : uniform01(rng);
      obs(i, j) = null_fraction == 0.0 || uniform01(rng) >= null_fraction;
    }
  }
  return ResponseMatrix(v, obs);
}

inline Matrix random_real(Index m, Index n, std::uint64_t seed, double lo = -1.0,
                          double hi = 1.0) {
  Rng rng = make_rng(seed);
  Matrix v(m, n);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) v(i, j) = uniform(rng, lo, hi);
  }
  return v;
}

inline double relative_error(double analytic, double numeric) {
  return std::abs(analytic - numeric) / std::max({1e-6, std::abs(analytic), std::abs(numeric)});
}

}  // namespace irtrecon::testing

#endif  // IRTRECON_TESTS_TEST_UTIL_HPP_
