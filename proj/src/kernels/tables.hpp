// Copyright 2026 The fcfnn Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FCFNN_SRC_KERNELS_TABLES_HPP_
#define FCFNN_SRC_KERNELS_TABLES_HPP_

#include "fcfnn/kernels.hpp"

namespace fcfnn::kernels {

const KernelTable& scalar_table();
#if defined(FCFNN_HAVE_AVX2)
const KernelTable& avx2_table();
#endif
#if defined(FCFNN_HAVE_NEON)
const KernelTable& neon_table();
#endif

}  // namespace fcfnn::kernels

#endif  // FCFNN_SRC_KERNELS_TABLES_HPP_
