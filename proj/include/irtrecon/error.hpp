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

#ifndef IRTRECON_ERROR_HPP_
#define IRTRECON_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace irtrecon {

// Base of every error the library throws. The CLI maps subclasses to exit
// codes: parse/structure/value/empty-input -> 3, numerical -> 4, the rest -> 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (ragged rows, bad line structure).
class StructuralError : public Error {
 public:
  StructuralError(const std::string& what, std::size_t line)
      : Error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A cell value that is non-numeric or outside [0,1]. Row/col are 0-based.
class ValueError : public Error {
 public:
  ValueError(const std::string& what, std::size_t row, std::size_t col)
      : Error(what), row_(row), col_(col) {}
  std::size_t row() const { return row_; }
  std::size_t col() const { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

class EmptyInputError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

// No observed cells to evaluate a closeness measure over.
class EmptyMaskError : public Error {
 public:
  using Error::Error;
};

// Data that cannot support estimation (all-null rows/columns, all-null matrix).
class DegenerateDataError : public Error {
 public:
  using Error::Error;
};

// SVD requested on a matrix with null cells.
class IncompleteMatrixError : public Error {
 public:
  using Error::Error;
};

// Gradient descent produced non-finite values.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::size_t epoch)
      : Error(what), epoch_(epoch) {}
  std::size_t epoch() const { return epoch_; }

 private:
  std::size_t epoch_;
};

}  // namespace irtrecon

#endif  // IRTRECON_ERROR_HPP_
