// Copyright 2026 The fcfnn Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FCFNN_LINALG_HPP_
#define FCFNN_LINALG_HPP_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace fcfnn {

/// Fixed-length dense vector of doubles.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t size, double fill = 0.0) : values_(size, fill) {}
  Vector(std::initializer_list<double> values) : values_(values) {}
  explicit Vector(std::vector<double> values) : values_(std::move(values)) {}

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  const double* data() const { return values_.data(); }
  double* data() { return values_.data(); }
  std::span<const double> span() const { return values_; }
  std::span<double> span() { return values_; }

  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }
  auto begin() { return values_.begin(); }
  auto end() { return values_.end(); }

  const std::vector<double>& values() const { return values_; }

  bool operator==(const Vector&) const = default;

 private:
  std::vector<double> values_;
};

/// Dense row-major matrix of doubles. Element (i, j) lives at
/// values[i * cols + j].
class Matrix {
 public:
  /// Empty 0x0 placeholder; every other constructor requires rows, cols > 0.
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return values_.size(); }

  double operator()(std::size_t i, std::size_t j) const {
    return values_[i * cols_ + j];
  }
  double& operator()(std::size_t i, std::size_t j) {
    return values_[i * cols_ + j];
  }

  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(values_).subspan(i * cols_, cols_);
  }

  const double* data() const { return values_.data(); }
  double* data() { return values_.data(); }
  std::span<const double> span() const { return values_; }
  std::span<double> span() { return values_; }
  const std::vector<double>& values() const { return values_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

std::string shape_string(const Matrix& m);
std::string shape_string(const Vector& v);

/// m * v. Each output is summed in ascending column order.
Vector matvec(const Matrix& m, const Vector& v);

/// transpose(m) * v, summed in ascending row order.
Vector matvec_transposed(const Matrix& m, const Vector& v);

Vector vec_add(const Vector& a, const Vector& b);

/// result(i, j) = a[i] * b[j]
Matrix outer(const Vector& a, const Vector& b);

/// Elementwise product.
Vector hadamard(const Vector& a, const Vector& b);

bool all_finite(std::span<const double> values);

}  // namespace fcfnn

#endif  // FCFNN_LINALG_HPP_
