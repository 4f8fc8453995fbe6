// Copyright 2026 The fcfnn Authors
// SPDX-License-Identifier: Apache-2.0

// AArch64 NEON kernels (two doubles per register). NEON is mandatory on
// AArch64, so this table is always usable when compiled in. Separate vmulq /
// vaddq keep the rounding sequence identical to the scalar reference.

#include <arm_neon.h>

#include <cmath>

#include "tables.hpp"

namespace fcfnn::kernels {
namespace {

void matvec(const double* m, std::size_t rows, std::size_t cols,
            const double* x, double* y) {
  std::size_t i = 0;
  // Two rows per register; lane k owns row i + k.
  for (; i + 2 <= rows; i += 2) {
    const double* r0 = m + i * cols;
    const double* r1 = r0 + cols;
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t j = 0;
    for (; j + 2 <= cols; j += 2) {
      const float64x2_t a0 = vld1q_f64(r0 + j);
      const float64x2_t a1 = vld1q_f64(r1 + j);
      const float64x2_t c0 = vzip1q_f64(a0, a1);  // {r0[j],   r1[j]}
      const float64x2_t c1 = vzip2q_f64(a0, a1);  // {r0[j+1], r1[j+1]}
      acc = vaddq_f64(acc, vmulq_f64(c0, vdupq_n_f64(x[j])));
      acc = vaddq_f64(acc, vmulq_f64(c1, vdupq_n_f64(x[j + 1])));
    }
    for (; j < cols; ++j) {
      const double pair[2] = {r0[j], r1[j]};
      acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(pair), vdupq_n_f64(x[j])));
    }
    vst1q_f64(y + i, acc);
  }
  for (; i < rows; ++i) {
    const double* row = m + i * cols;
    double acc = 0.0;
    for (std::size_t j = 0; j < cols; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
}

void matvec_transposed(const double* m, std::size_t rows, std::size_t cols,
                       const double* x, double* y) {
  for (std::size_t j = 0; j < cols; ++j) y[j] = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    const double* row = m + i * cols;
    const float64x2_t b = vdupq_n_f64(xi);
    std::size_t j = 0;
    for (; j + 2 <= cols; j += 2)
      vst1q_f64(y + j, vaddq_f64(vld1q_f64(y + j), vmulq_f64(vld1q_f64(row + j), b)));
    for (; j < cols; ++j) y[j] += row[j] * xi;
  }
}

void add(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vaddq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (; i < n; ++i) out[i] = a[i] + b[i];
}

void mul(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void scale(double alpha, const double* x, double* out, std::size_t n) {
  const float64x2_t a = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vmulq_f64(a, vld1q_f64(x + i)));
  for (; i < n; ++i) out[i] = alpha * x[i];
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t a = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(a, vld1q_f64(x + i))));
  for (; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

void relu(const double* x, double* out, std::size_t n) {
  const float64x2_t zero = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t v = vld1q_f64(x + i);
    // Select on x > 0 so -0.0 and NaN both map to +0.0.
    vst1q_f64(out + i, vbslq_f64(vcgtq_f64(v, zero), v, zero));
  }
  for (; i < n; ++i) out[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void adam(double* params, const double* grads, double* m, double* v,
          std::size_t n, const AdamCoefficients& c) {
  const float64x2_t beta1 = vdupq_n_f64(c.beta1);
  const float64x2_t beta2 = vdupq_n_f64(c.beta2);
  const float64x2_t omb1 = vdupq_n_f64(c.one_minus_beta1);
  const float64x2_t omb2 = vdupq_n_f64(c.one_minus_beta2);
  const float64x2_t bc1 = vdupq_n_f64(c.bias_correction1);
  const float64x2_t bc2 = vdupq_n_f64(c.bias_correction2);
  const float64x2_t lr = vdupq_n_f64(c.learning_rate);
  const float64x2_t eps = vdupq_n_f64(c.epsilon);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t g = vld1q_f64(grads + i);
    const float64x2_t mi = vaddq_f64(vmulq_f64(beta1, vld1q_f64(m + i)), vmulq_f64(omb1, g));
    const float64x2_t vi =
        vaddq_f64(vmulq_f64(beta2, vld1q_f64(v + i)), vmulq_f64(omb2, vmulq_f64(g, g)));
    vst1q_f64(m + i, mi);
    vst1q_f64(v + i, vi);
    const float64x2_t step = vdivq_f64(vmulq_f64(lr, vdivq_f64(mi, bc1)),
                                       vaddq_f64(vsqrtq_f64(vdivq_f64(vi, bc2)), eps));
    vst1q_f64(params + i, vsubq_f64(vld1q_f64(params + i), step));
  }
  for (; i < n; ++i) {
    const double g = grads[i];
    m[i] = c.beta1 * m[i] + c.one_minus_beta1 * g;
    v[i] = c.beta2 * v[i] + c.one_minus_beta2 * (g * g);
    const double m_hat = m[i] / c.bias_correction1;
    const double v_hat = v[i] / c.bias_correction2;
    params[i] = params[i] -
                (c.learning_rate * m_hat) / (std::sqrt(v_hat) + c.epsilon);
  }
}

}  // namespace

const KernelTable& neon_table() {
  static const KernelTable table{Backend::kNeon, matvec, matvec_transposed,
                                 add,  mul,  scale, axpy, relu, adam};
  return table;
}

}  // namespace fcfnn::kernels
