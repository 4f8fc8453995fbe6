// Copyright 2026 The fcfnn Authors
// SPDX-License-Identifier: Apache-2.0

#include "fcfnn/linalg.hpp"

#include <cmath>

#include "fcfnn/error.hpp"
#include "fcfnn/kernels.hpp"

namespace fcfnn {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols) {
  if (rows == 0 || cols == 0) {
    throw DimensionError("matrix dimensions must be positive, got " +
                         std::to_string(rows) + "x" + std::to_string(cols));
  }
  values_.assign(rows * cols, fill);
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (rows == 0 || cols == 0) {
    throw DimensionError("matrix dimensions must be positive, got " +
                         std::to_string(rows) + "x" + std::to_string(cols));
  }
  if (values_.size() != rows * cols) {
    throw DimensionError("matrix " + std::to_string(rows) + "x" +
                         std::to_string(cols) + " needs " +
                         std::to_string(rows * cols) + " values, got " +
                         std::to_string(values_.size()));
  }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  if (rows_ == 0 || cols_ == 0) throw DimensionError("matrix literal is empty");
  values_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("ragged matrix literal");
    values_.insert(values_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::string shape_string(const Matrix& m) {
  return "[" + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + "]";
}

std::string shape_string(const Vector& v) {
  return "[" + std::to_string(v.size()) + "]";
}

namespace {

void require_same_length(const Vector& a, const Vector& b, const char* op) {
  if (a.size() != b.size()) {
    throw DimensionError(std::string(op) + ": length mismatch " +
                         shape_string(a) + " vs " + shape_string(b));
  }
}

}  // namespace

Vector matvec(const Matrix& m, const Vector& v) {
  if (m.cols() != v.size()) {
    throw DimensionError("matvec: matrix " + shape_string(m) +
                         " does not conform with vector " + shape_string(v));
  }
  Vector out(m.rows());
  kernels::active().matvec(m.data(), m.rows(), m.cols(), v.data(), out.data());
  return out;
}

Vector matvec_transposed(const Matrix& m, const Vector& v) {
  if (m.rows() != v.size()) {
    throw DimensionError("matvec_transposed: matrix " + shape_string(m) +
                         " does not conform with vector " + shape_string(v));
  }
  Vector out(m.cols());
  kernels::active().matvec_transposed(m.data(), m.rows(), m.cols(), v.data(),
                                      out.data());
  return out;
}

Vector vec_add(const Vector& a, const Vector& b) {
  require_same_length(a, b, "vec_add");
  Vector out(a.size());
  kernels::active().add(a.data(), b.data(), out.data(), a.size());
  return out;
}

Matrix outer(const Vector& a, const Vector& b) {
  if (a.empty() || b.empty()) {
    throw DimensionError("outer: operands must be nonempty, got " +
                         shape_string(a) + " and " + shape_string(b));
  }
  Matrix out(a.size(), b.size());
  const auto& k = kernels::active();
  for (std::size_t i = 0; i < a.size(); ++i) {
    k.scale(a[i], b.data(), out.data() + i * b.size(), b.size());
  }
  return out;
}

Vector hadamard(const Vector& a, const Vector& b) {
  require_same_length(a, b, "hadamard");
  Vector out(a.size());
  kernels::active().mul(a.data(), b.data(), out.data(), a.size());
  return out;
}

bool all_finite(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace fcfnn
