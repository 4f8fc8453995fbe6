// Copyright 2026 The fcfnn Authors
// SPDX-License-Identifier: Apache-2.0

// AVX2 kernels. Compiled with -mavx2 only; callers reach this file through
// the dispatcher after a CPU feature check.

#include <immintrin.h>

#include <cmath>

#include "tables.hpp"

namespace fcfnn::kernels {
namespace {

// Accumulates 4 consecutive rows (starting at `m`) against x into `acc`,
// walking columns in ascending order. Each lane owns one row, so lane k sees
// exactly the scalar sequence acc += m[k][j] * x[j].
inline __m256d rows4(const double* m, std::size_t cols, const double* x) {
  const double* r0 = m;
  const double* r1 = m + cols;
  const double* r2 = m + 2 * cols;
  const double* r3 = m + 3 * cols;
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= cols; j += 4) {
    const __m256d a0 = _mm256_loadu_pd(r0 + j);
    const __m256d a1 = _mm256_loadu_pd(r1 + j);
    const __m256d a2 = _mm256_loadu_pd(r2 + j);
    const __m256d a3 = _mm256_loadu_pd(r3 + j);
    // 4x4 transpose: c_k = {r0[j+k], r1[j+k], r2[j+k], r3[j+k]}
    const __m256d t0 = _mm256_unpacklo_pd(a0, a1);
    const __m256d t1 = _mm256_unpackhi_pd(a0, a1);
    const __m256d t2 = _mm256_unpacklo_pd(a2, a3);
    const __m256d t3 = _mm256_unpackhi_pd(a2, a3);
    const __m256d c0 = _mm256_permute2f128_pd(t0, t2, 0x20);
    const __m256d c1 = _mm256_permute2f128_pd(t1, t3, 0x20);
    const __m256d c2 = _mm256_permute2f128_pd(t0, t2, 0x31);
    const __m256d c3 = _mm256_permute2f128_pd(t1, t3, 0x31);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(c0, _mm256_broadcast_sd(x + j)));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(c1, _mm256_broadcast_sd(x + j + 1)));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(c2, _mm256_broadcast_sd(x + j + 2)));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(c3, _mm256_broadcast_sd(x + j + 3)));
  }
  for (; j < cols; ++j) {
    const __m256d c = _mm256_set_pd(r3[j], r2[j], r1[j], r0[j]);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(c, _mm256_broadcast_sd(x + j)));
  }
  return acc;
}

// Same as rows4 for 8 rows with two independent dependency chains.
inline void rows8(const double* m, std::size_t cols, const double* x,
                  double* y) {
  const double* r[8];
  for (int k = 0; k < 8; ++k) r[k] = m + k * cols;
  __m256d lo = _mm256_setzero_pd();
  __m256d hi = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= cols; j += 4) {
    const __m256d x0 = _mm256_broadcast_sd(x + j);
    const __m256d x1 = _mm256_broadcast_sd(x + j + 1);
    const __m256d x2 = _mm256_broadcast_sd(x + j + 2);
    const __m256d x3 = _mm256_broadcast_sd(x + j + 3);

    const __m256d a0 = _mm256_loadu_pd(r[0] + j);
    const __m256d a1 = _mm256_loadu_pd(r[1] + j);
    const __m256d a2 = _mm256_loadu_pd(r[2] + j);
    const __m256d a3 = _mm256_loadu_pd(r[3] + j);
    const __m256d b0 = _mm256_loadu_pd(r[4] + j);
    const __m256d b1 = _mm256_loadu_pd(r[5] + j);
    const __m256d b2 = _mm256_loadu_pd(r[6] + j);
    const __m256d b3 = _mm256_loadu_pd(r[7] + j);

    const __m256d t0 = _mm256_unpacklo_pd(a0, a1);
    const __m256d t1 = _mm256_unpackhi_pd(a0, a1);
    const __m256d t2 = _mm256_unpacklo_pd(a2, a3);
    const __m256d t3 = _mm256_unpackhi_pd(a2, a3);
    const __m256d u0 = _mm256_unpacklo_pd(b0, b1);
    const __m256d u1 = _mm256_unpackhi_pd(b0, b1);
    const __m256d u2 = _mm256_unpacklo_pd(b2, b3);
    const __m256d u3 = _mm256_unpackhi_pd(b2, b3);

    lo = _mm256_add_pd(lo, _mm256_mul_pd(_mm256_permute2f128_pd(t0, t2, 0x20), x0));
    hi = _mm256_add_pd(hi, _mm256_mul_pd(_mm256_permute2f128_pd(u0, u2, 0x20), x0));
    lo = _mm256_add_pd(lo, _mm256_mul_pd(_mm256_permute2f128_pd(t1, t3, 0x20), x1));
    hi = _mm256_add_pd(hi, _mm256_mul_pd(_mm256_permute2f128_pd(u1, u3, 0x20), x1));
    lo = _mm256_add_pd(lo, _mm256_mul_pd(_mm256_permute2f128_pd(t0, t2, 0x31), x2));
    hi = _mm256_add_pd(hi, _mm256_mul_pd(_mm256_permute2f128_pd(u0, u2, 0x31), x2));
    lo = _mm256_add_pd(lo, _mm256_mul_pd(_mm256_permute2f128_pd(t1, t3, 0x31), x3));
    hi = _mm256_add_pd(hi, _mm256_mul_pd(_mm256_permute2f128_pd(u1, u3, 0x31), x3));
  }
  for (; j < cols; ++j) {
    const __m256d xj = _mm256_broadcast_sd(x + j);
    lo = _mm256_add_pd(
        lo, _mm256_mul_pd(_mm256_set_pd(r[3][j], r[2][j], r[1][j], r[0][j]), xj));
    hi = _mm256_add_pd(
        hi, _mm256_mul_pd(_mm256_set_pd(r[7][j], r[6][j], r[5][j], r[4][j]), xj));
  }
  _mm256_storeu_pd(y, lo);
  _mm256_storeu_pd(y + 4, hi);
}

void matvec(const double* m, std::size_t rows, std::size_t cols,
            const double* x, double* y) {
  std::size_t i = 0;
  for (; i + 8 <= rows; i += 8) rows8(m + i * cols, cols, x, y + i);
  for (; i + 4 <= rows; i += 4) _mm256_storeu_pd(y + i, rows4(m + i * cols, cols, x));
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
    const __m256d b = _mm256_set1_pd(xi);
    std::size_t j = 0;
    for (; j + 4 <= cols; j += 4) {
      const __m256d p = _mm256_mul_pd(_mm256_loadu_pd(row + j), b);
      _mm256_storeu_pd(y + j, _mm256_add_pd(_mm256_loadu_pd(y + j), p));
    }
    for (; j < cols; ++j) y[j] += row[j] * xi;
  }
}

void add(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) out[i] = a[i] + b[i];
}

void mul(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void scale(double alpha, const double* x, double* out, std::size_t n) {
  const __m256d a = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(a, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) out[i] = alpha * x[i];
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d a = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d p = _mm256_mul_pd(a, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), p));
  }
  for (; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

void relu(const double* x, double* out, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  // max_pd(a, b) yields b unless a > b, matching `x > 0 ? x : 0` for -0.0
  // and NaN.
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_max_pd(_mm256_loadu_pd(x + i), zero));
  for (; i < n; ++i) out[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void adam(double* params, const double* grads, double* m, double* v,
          std::size_t n, const AdamCoefficients& c) {
  const __m256d beta1 = _mm256_set1_pd(c.beta1);
  const __m256d beta2 = _mm256_set1_pd(c.beta2);
  const __m256d omb1 = _mm256_set1_pd(c.one_minus_beta1);
  const __m256d omb2 = _mm256_set1_pd(c.one_minus_beta2);
  const __m256d bc1 = _mm256_set1_pd(c.bias_correction1);
  const __m256d bc2 = _mm256_set1_pd(c.bias_correction2);
  const __m256d lr = _mm256_set1_pd(c.learning_rate);
  const __m256d eps = _mm256_set1_pd(c.epsilon);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d g = _mm256_loadu_pd(grads + i);
    const __m256d mi = _mm256_add_pd(_mm256_mul_pd(beta1, _mm256_loadu_pd(m + i)),
                                     _mm256_mul_pd(omb1, g));
    const __m256d vi = _mm256_add_pd(_mm256_mul_pd(beta2, _mm256_loadu_pd(v + i)),
                                     _mm256_mul_pd(omb2, _mm256_mul_pd(g, g)));
    _mm256_storeu_pd(m + i, mi);
    _mm256_storeu_pd(v + i, vi);
    const __m256d m_hat = _mm256_div_pd(mi, bc1);
    const __m256d v_hat = _mm256_div_pd(vi, bc2);
    const __m256d step = _mm256_div_pd(_mm256_mul_pd(lr, m_hat),
                                       _mm256_add_pd(_mm256_sqrt_pd(v_hat), eps));
    _mm256_storeu_pd(params + i, _mm256_sub_pd(_mm256_loadu_pd(params + i), step));
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

const KernelTable& avx2_table() {
  static const KernelTable table{Backend::kAvx2, matvec, matvec_transposed,
                                 add,  mul,  scale, axpy, relu, adam};
  return table;
}

}  // namespace fcfnn::kernels
