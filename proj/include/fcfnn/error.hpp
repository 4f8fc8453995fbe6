// Copyright 2026 The fcfnn Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FCFNN_ERROR_HPP_
#define FCFNN_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace fcfnn {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not conform.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A value is NaN/Inf, or a numeric precondition is violated.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration (training knobs, generator settings, architecture).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed input data: CSV structure, schema, out-of-range survey values.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Malformed, truncated or unsupported model file.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Filesystem failure.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace fcfnn

#endif  // FCFNN_ERROR_HPP_
