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


#ifndef IRTRECON_METRICS_HPP_
#define IRTRECON_METRICS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "irtrecon/error.hpp"
#include "irtrecon/response_matrix.hpp"
#include "irtrecon/types.hpp"

namespace irtrecon::metrics {

// Root mean squared difference over A's observed cells.
inline double rmse(const ResponseMatrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("rmse: matrices differ in shape");
  }
  const Index count = a.observed_count();
  if (count == 0) throw EmptyMaskError("rmse: no observed cells");
  double sum = 0.0;
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      if (!a.observed(i, j)) continue;
      const double d = a.value(i, j) - b(i, j);
      sum += d * d;
    }
  }
  return std::sqrt(sum / static_cast<double>(count));
}

namespace detail {

// Count of A's observed cells where B agrees, and the observed total.
inline std::pair<Index, Index> agreement(const DiscreteResponseMatrix& a,
                                         const DiscreteResponseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("accuracy: matrices differ in shape");
  }
  Index matches = 0, count = 0;
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      if (!a.observed(i, j)) continue;
      if (!b.observed(i, j)) {
        throw ValueError("accuracy: comparison matrix is null at an observed cell",
                         static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      }
      ++count;
      if (a.value(i, j) == b.value(i, j)) ++matches;
    }
  }
  if (count == 0) throw EmptyMaskError("accuracy: no observed cells");
  return {matches, count};
}

}  // namespace detail

// Fraction of A's observed cells where the binary values agree.
inline double accuracy(const DiscreteResponseMatrix& a, const DiscreteResponseMatrix& b) {
  const auto [matches, count] = detail::agreement(a, b);
  return static_cast<double>(matches) / static_cast<double>(count);
}

// Mean squared difference of binary values over the mask, i.e. the share of
// disagreeing cells. Always equals 1 - accuracy.
inline double mismatch_rate(const DiscreteResponseMatrix& a,
                            const DiscreteResponseMatrix& b) {
  detail::agreement(a, b);  // shape, mask and emptiness checks
  double sum = 0.0;
  Index count = 0;
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      if (!a.observed(i, j)) continue;
      const double d = a.value(i, j) - b.value(i, j);
      sum += d * d;
      ++count;
    }
  }
  return sum / static_cast<double>(count);
}

struct ClosenessReport {
  double rmse = 0.0;
  double accuracy = 0.0;
  Index observed = 0;
};

// RMSE on the continuous reconstruction; accuracy after thresholding both
// matrices at 0.5.
inline ClosenessReport closeness(const ResponseMatrix& a, const Matrix& reconstruction) {
  ClosenessReport r;
  r.rmse = rmse(a, reconstruction);
  r.accuracy = accuracy(binarize(a), binarize(reconstruction));
  r.observed = a.observed_count();
  return r;
}

enum class Method { kSvd, kMatDec, kIrt };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::kSvd: return "SVD";
    case Method::kMatDec: return "MatDec";
    case Method::kIrt: return "IRT";
  }
  return "?";
}

struct Reconstruction {
  Method method;
  std::optional<Index> k;  // empty for IRT
  Matrix values;
};

struct TableRow {
  Method method;
  std::optional<Index> k;
  double rmse;
  double accuracy;
};

struct ComparisonTable {
  std::string matrix;
  Index rows = 0;
  Index cols = 0;
  bool complete = true;
  std::vector<TableRow> entries;

  const TableRow* find(Method method, std::optional<Index> k = std::nullopt) const {
    for (const auto& e : entries) {
      if (e.method == method && e.k == k) return &e;
    }
    return nullptr;
  }
};

inline ComparisonTable compare(const ResponseMatrix& a,
                               const std::vector<Reconstruction>& recs,
                               std::string label = "observed") {
  ComparisonTable table;
  table.matrix = std::move(label);
  table.rows = a.rows();
  table.cols = a.cols();
  table.complete = a.complete();
  for (const auto& rec : recs) {
    if (rec.method == Method::kIrt && rec.k) {
      throw ParameterError("IRT rows carry no depth k");
    }
    if (rec.method != Method::kIrt && (!rec.k || *rec.k < 1)) {
      throw ParameterError(std::string(method_name(rec.method)) + " rows need k >= 1");
    }
    if (rec.method == Method::kSvd && !table.complete) {
      throw IncompleteMatrixError("SVD rows are undefined for an incomplete matrix");
    }
    const ClosenessReport c = closeness(a, rec.values);
    table.entries.push_back({rec.method, rec.k, c.rmse, c.accuracy});
  }
  return table;
}

inline std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

// Plain-text layout: one block per measure, one line per depth k with the
// SVD and MatDec columns side by side, and the IRT line after k = 1.
inline std::string format_table(const ComparisonTable& t) {
  std::vector<Index> ks;
  for (const auto& e : t.entries) {
    if (e.k && std::find(ks.begin(), ks.end(), *e.k) == ks.end()) ks.push_back(*e.k);
  }
  std::sort(ks.begin(), ks.end());
  const TableRow* irt = t.find(Method::kIrt);

  std::ostringstream out;
  out << "matrix: " << t.matrix << " (" << t.rows << " x " << t.cols << ", "
      << (t.complete ? "complete" : "incomplete") << ")\n";
  char line[160];
  std::snprintf(line, sizeof(line), "%-9s %4s  %-8s  %-8s  %-8s\n", "", "k", "SVD",
                "MatDec", "IRT");
  out << line;

  for (int block = 0; block < 2; ++block) {
    auto pick = [&](const TableRow* r) -> std::string {
      if (!r) return "-";
      return fixed4(block == 0 ? r->rmse : r->accuracy);
    };
    const char* name = block == 0 ? "RMSE" : "accuracy";
    bool first = true;
    bool irt_done = irt == nullptr;
    auto emit_irt = [&] {
      std::snprintf(line, sizeof(line), "%-9s %4s  %-8s  %-8s  %-8s\n",
                    first ? name : "", "-", "", "", pick(irt).c_str());
      out << line;
      first = false;
      irt_done = true;
    };
    for (Index k : ks) {
      const TableRow* svd = t.find(Method::kSvd, k);
      const TableRow* md = t.find(Method::kMatDec, k);
      std::snprintf(line, sizeof(line), "%-9s %4lld  %-8s  %-8s  %-8s\n",
                    first ? name : "", static_cast<long long>(k),
                    t.complete ? pick(svd).c_str() : "-", pick(md).c_str(), "");
      out << line;
      first = false;
      if (k == 1 && !irt_done) emit_irt();
    }
    if (!irt_done) emit_irt();
  }
  return out.str();
}

// "SVD1 vs IRT vs SVD2: 0.4066 > 0.3915 > 0.3851" for the given low-rank
// method. Empty when any of the three rows is missing.
inline std::string ordering_line(const ComparisonTable& t, Method low_rank) {
  const TableRow* k1 = t.find(low_rank, 1);
  const TableRow* k2 = t.find(low_rank, 2);
  const TableRow* irt = t.find(Method::kIrt);
  if (!k1 || !k2 || !irt) return {};
  auto op = [](double x, double y) { return x > y ? " > " : (x < y ? " < " : " = "); };
  const std::string name = method_name(low_rank);
  return name + "1 vs IRT vs " + name + "2: " + fixed4(k1->rmse) + op(k1->rmse, irt->rmse) +
         fixed4(irt->rmse) + op(irt->rmse, k2->rmse) + fixed4(k2->rmse);
}

// IRT: m abilities + 2n item parameters; depth-k factorization: k(m + n).
inline Index free_parameter_count(Method method, Index m, Index n, Index k = 1) {
  if (m < 1 || n < 1) throw ParameterError("m and n must be >= 1");
  switch (method) {
    case Method::kIrt: return m + 2 * n;
    case Method::kMatDec:
    case Method::kSvd:
      if (k < 1) throw ParameterError("k must be >= 1");
      return k * (m + n);
  }
  return 0;
}

}  // namespace irtrecon::metrics

#endif  // IRTRECON_METRICS_HPP_
