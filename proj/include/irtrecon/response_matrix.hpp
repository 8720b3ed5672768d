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


#ifndef IRTRECON_RESPONSE_MATRIX_HPP_
#define IRTRECON_RESPONSE_MATRIX_HPP_

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "irtrecon/error.hpp"
#include "irtrecon/rng.hpp"
#include "irtrecon/types.hpp"

namespace irtrecon {

// An m x n grid of optional values in [0,1]. Rows are examinees, columns are
// items. Storage under a null cell is unconstrained and never read by any
// measure; equality compares the mask and observed values only.
class ResponseMatrix {
 public:
  // Fully observed.
  explicit ResponseMatrix(Matrix values)
      : values_(std::move(values)),
        observed_(Mask::Constant(values_.rows(), values_.cols(), true)) {
    validate();
  }

  ResponseMatrix(Matrix values, Mask observed)
      : values_(std::move(values)), observed_(std::move(observed)) {
    if (values_.rows() != observed_.rows() ||
        values_.cols() != observed_.cols()) {
      throw ShapeError("value grid and observation mask differ in shape");
    }
    validate();
  }

  Index rows() const { return values_.rows(); }
  Index cols() const { return values_.cols(); }

  bool observed(Index i, Index j) const { return observed_(i, j); }

  std::optional<double> at(Index i, Index j) const {
    if (!observed_(i, j)) return std::nullopt;
    return values_(i, j);
  }

  // Raw storage; only meaningful where observed(i, j).
  double value(Index i, Index j) const { return values_(i, j); }

  const Matrix& values() const { return values_; }
  const Mask& mask() const { return observed_; }

  Index observed_count() const { return observed_.count(); }
  bool complete() const { return observed_.all(); }

  // Mask as 0/1 doubles, for weighted sums.
  Matrix indicator() const { return observed_.cast<double>().matrix(); }

  friend bool operator==(const ResponseMatrix& x, const ResponseMatrix& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols()) return false;
    if ((x.observed_ != y.observed_).any()) return false;
    for (Index j = 0; j < x.cols(); ++j) {
      for (Index i = 0; i < x.rows(); ++i) {
        if (x.observed_(i, j) && x.values_(i, j) != y.values_(i, j)) {
          return false;
        }
      }
    }
    return true;
  }

 private:
  void validate() const {
    if (values_.rows() < 1 || values_.cols() < 1) {
      throw EmptyInputError("response matrix needs at least one row and column");
    }
    for (Index i = 0; i < rows(); ++i) {
      for (Index j = 0; j < cols(); ++j) {
        if (!observed_(i, j)) continue;
        const double v = values_(i, j);
        if (!(v >= 0.0 && v <= 1.0)) {
          std::ostringstream msg;
          msg << "value " << v << " at row " << i << ", col " << j
              << " is outside [0,1]";
          throw ValueError(msg.str(), static_cast<std::size_t>(i),
                           static_cast<std::size_t>(j));
        }
      }
    }
  }

  Matrix values_;
  Mask observed_;
};

// A response matrix whose present cells are exactly 0 or 1.
class DiscreteResponseMatrix {
 public:
  explicit DiscreteResponseMatrix(ResponseMatrix m) : m_(std::move(m)) {
    for (Index i = 0; i < m_.rows(); ++i) {
      for (Index j = 0; j < m_.cols(); ++j) {
        if (m_.observed(i, j) && m_.value(i, j) != 0.0 &&
            m_.value(i, j) != 1.0) {
          std::ostringstream msg;
          msg << "non-binary value " << m_.value(i, j) << " at row " << i
              << ", col " << j;
          throw ValueError(msg.str(), static_cast<std::size_t>(i),
                           static_cast<std::size_t>(j));
        }
      }
    }
  }

  const ResponseMatrix& matrix() const { return m_; }
  Index rows() const { return m_.rows(); }
  Index cols() const { return m_.cols(); }
  bool observed(Index i, Index j) const { return m_.observed(i, j); }
  double value(Index i, Index j) const { return m_.value(i, j); }

  friend bool operator==(const DiscreteResponseMatrix& x,
                         const DiscreteResponseMatrix& y) {
    return x.m_ == y.m_;
  }

 private:
  ResponseMatrix m_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace detail

namespace detail {

// Splits text into a numeric grid; empty cells are unobserved. Checks
// structure and numeric syntax only, not the value range.
inline std::pair<Matrix, Mask> parse_grid(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  if (lines.empty()) throw EmptyInputError("input has no rows");

  std::vector<std::vector<std::string_view>> rows;
  rows.reserve(lines.size());
  for (std::size_t r = 0; r < lines.size(); ++r) {
    auto line = lines[r];
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    rows.push_back(split_cells(line));
    if (rows.back().size() != rows.front().size()) {
      throw StructuralError("ragged row at line " + std::to_string(r + 1) +
                                ": expected " + std::to_string(rows.front().size()) +
                                " cells, found " + std::to_string(rows.back().size()),
                            r + 1);
    }
  }
  const auto m = static_cast<Index>(rows.size());
  const auto n = static_cast<Index>(rows.front().size());
  if (n == 1 && m == 1 && trim(rows[0][0]).empty()) {
    throw EmptyInputError("input has no cells");
  }

  Matrix values = Matrix::Zero(m, n);
  Mask observed = Mask::Constant(m, n, false);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) {
      const auto cell = trim(rows[i][j]);
      if (cell.empty()) continue;
      double v = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc() || res.ptr != cell.data() + cell.size() ||
          !std::isfinite(v)) {
        throw ValueError("non-numeric cell '" + std::string(cell) + "' at row " +
                             std::to_string(i) + ", col " + std::to_string(j),
                         static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      }
      values(i, j) = v;
      observed(i, j) = true;
    }
  }
  return {std::move(values), std::move(observed)};
}

}  // namespace detail

// Parses comma-separated rows of values in [0,1]; an empty cell is a null.
// A single trailing newline is optional. Lines are numbered from 1.
inline ResponseMatrix parse_csv(std::string_view text) {
  auto [values, observed] = detail::parse_grid(text);
  return ResponseMatrix(std::move(values), std::move(observed));
}

inline ResponseMatrix load_csv(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in),
                         std::istreambuf_iterator<char>()};
  return parse_csv(text);
}

inline ResponseMatrix load_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return load_csv(in);
}

// Shortest round-trip decimal per cell, empty for nulls, "\n" after every row.
inline void save_csv(std::ostream& out, const ResponseMatrix& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      if (m.observed(i, j)) out << detail::format_double(m.value(i, j));
    }
    out << '\n';
  }
}

inline std::string to_csv(const ResponseMatrix& m) {
  std::ostringstream out;
  save_csv(out, m);
  return out.str();
}

// Dense real matrix in the same layout; values are not range-checked.
inline void save_csv(std::ostream& out, const Matrix& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << detail::format_double(m(i, j));
    }
    out << '\n';
  }
}

// Nullifies exactly round(ratio * m * n) distinct cells drawn uniformly
// without replacement. Requires a fully observed input.
inline ResponseMatrix mask_random(const ResponseMatrix& m, double ratio,
                                  std::uint64_t seed) {
  if (!(ratio >= 0.0 && ratio < 1.0)) {
    throw ParameterError("mask ratio must lie in [0, 1)");
  }
  if (!m.complete()) {
    throw ParameterError("mask_random expects a fully observed matrix");
  }
  const Index total = m.rows() * m.cols();
  const auto nulls = static_cast<Index>(std::llround(ratio * static_cast<double>(total)));

  // Partial Fisher-Yates over row-major cell indices.
  std::vector<Index> cells(static_cast<std::size_t>(total));
  std::iota(cells.begin(), cells.end(), Index{0});
  Rng rng = make_rng(seed);
  for (Index t = 0; t < nulls; ++t) {
    const auto span = static_cast<std::uint64_t>(total - t);
    const auto pick = t + static_cast<Index>(uniform01(rng) * static_cast<double>(span));
    std::swap(cells[static_cast<std::size_t>(t)],
              cells[static_cast<std::size_t>(std::min(pick, total - 1))]);
  }

  Mask observed = m.mask();
  for (Index t = 0; t < nulls; ++t) {
    const Index c = cells[static_cast<std::size_t>(t)];
    observed(c / m.cols(), c % m.cols()) = false;
  }
  return ResponseMatrix(m.values(), std::move(observed));
}

// Present cells become 1 when value >= threshold, else 0; nulls stay null.
inline DiscreteResponseMatrix binarize(const ResponseMatrix& m,
                                       double threshold = 0.5) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw ParameterError("threshold must lie in [0, 1]");
  }
  Matrix out = Matrix::Zero(m.rows(), m.cols());
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (m.observed(i, j)) out(i, j) = m.value(i, j) >= threshold ? 1.0 : 0.0;
    }
  }
  return DiscreteResponseMatrix(ResponseMatrix(std::move(out), m.mask()));
}

// Dense real reconstruction to a fully observed 0/1 matrix. Values outside
// [0,1] are allowed on input.
inline DiscreteResponseMatrix binarize(const Matrix& m, double threshold = 0.5) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw ParameterError("threshold must lie in [0, 1]");
  }
  Matrix out = (m.array() >= threshold).cast<double>().matrix();
  return DiscreteResponseMatrix(ResponseMatrix(std::move(out)));
}

}  // namespace irtrecon

#endif  // IRTRECON_RESPONSE_MATRIX_HPP_
