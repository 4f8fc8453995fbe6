// Copyright 2026 The fcfnn Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FCFNN_KERNELS_HPP_
#define FCFNN_KERNELS_HPP_

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

// Raw inner loops used by linalg and the optimizers.
//
// Every backend computes exactly the same IEEE-754 operation sequence per
// output element as the scalar reference: SIMD lanes run over independent
// outputs, reductions keep natural index order, and no backend fuses a
// multiply with an add. Backends are therefore interchangeable bit for bit,
// which the equivalence tests check.

namespace fcfnn::kernels {

enum class Backend { kScalar, kAvx2, kNeon };

/// Bias-corrected Adam coefficients for one step.
struct AdamCoefficients {
  double learning_rate;
  double beta1;
  double beta2;
  double one_minus_beta1;
  double one_minus_beta2;
  double bias_correction1;  // 1 - beta1^t
  double bias_correction2;  // 1 - beta2^t
  double epsilon;
};

struct KernelTable {
  Backend backend;

  // y[i] = sum_j m[i*cols + j] * x[j], j ascending, starting from 0.0.
  void (*matvec)(const double* m, std::size_t rows, std::size_t cols,
                 const double* x, double* y);

  // y[j] = sum_i m[i*cols + j] * x[i], i ascending. Rows with x[i] == 0 are
  // skipped.
  void (*matvec_transposed)(const double* m, std::size_t rows,
                            std::size_t cols, const double* x, double* y);

  // out[i] = a[i] + b[i]
  void (*add)(const double* a, const double* b, double* out, std::size_t n);

  // out[i] = a[i] * b[i]
  void (*mul)(const double* a, const double* b, double* out, std::size_t n);

  // out[i] = alpha * x[i]
  void (*scale)(double alpha, const double* x, double* out, std::size_t n);

  // y[i] = y[i] + alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);

  // out[i] = x[i] > 0 ? x[i] : 0
  void (*relu)(const double* x, double* out, std::size_t n);

  // In-place Adam update of params with moment buffers m and v.
  void (*adam)(double* params, const double* grads, double* m, double* v,
               std::size_t n, const AdamCoefficients& c);
};

/// Kernel table for `backend`, or nullptr when this build/CPU lacks it.
const KernelTable* table(Backend backend);

/// Backends usable on this machine, scalar first.
std::vector<Backend> available_backends();

/// The table used by the library. Chosen on first use: the FCFNN_KERNELS
/// environment variable ("scalar", "avx2", "neon") if set and available,
/// otherwise the widest available backend.
const KernelTable& active();

/// Overrides the active backend. Throws ConfigError if unavailable.
void set_backend(Backend backend);

std::string_view backend_name(Backend backend);
std::optional<Backend> parse_backend(std::string_view name);

}  // namespace fcfnn::kernels

#endif  // FCFNN_KERNELS_HPP_
