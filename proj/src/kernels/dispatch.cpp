// Copyright 2026 The fcfnn Authors
// SPDX-License-Identifier: Apache-2.0

#include <atomic>
#include <cstdlib>

#include "fcfnn/error.hpp"
#include "tables.hpp"

namespace fcfnn::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(FCFNN_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable* choose_initial() {
  if (const char* env = std::getenv("FCFNN_KERNELS")) {
    if (auto requested = parse_backend(env)) {
      if (const KernelTable* t = table(*requested)) return t;
    }
  }
  const std::vector<Backend> backends = available_backends();
  return table(backends.back());
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{choose_initial()};
  return slot;
}

}  // namespace

const KernelTable* table(Backend backend) {
  switch (backend) {
    case Backend::kScalar:
      return &scalar_table();
    case Backend::kAvx2:
#if defined(FCFNN_HAVE_AVX2)
      if (cpu_has_avx2()) return &avx2_table();
#endif
      return nullptr;
    case Backend::kNeon:
#if defined(FCFNN_HAVE_NEON)
      return &neon_table();
#else
      return nullptr;
#endif
  }
  return nullptr;
}

std::vector<Backend> available_backends() {
  std::vector<Backend> out;
  for (Backend b : {Backend::kScalar, Backend::kAvx2, Backend::kNeon}) {
    if (table(b) != nullptr) out.push_back(b);
  }
  return out;
}

const KernelTable& active() {
  return *active_slot().load(std::memory_order_acquire);
}

void set_backend(Backend backend) {
  const KernelTable* t = table(backend);
  if (t == nullptr) {
    throw ConfigError("kernel backend '" + std::string(backend_name(backend)) +
                      "' is not available on this machine");
  }
  active_slot().store(t, std::memory_order_release);
}

std::string_view backend_name(Backend backend) {
  switch (backend) {
    case Backend::kScalar:
      return "scalar";
    case Backend::kAvx2:
      return "avx2";
    case Backend::kNeon:
      return "neon";
  }
  return "unknown";
}

std::optional<Backend> parse_backend(std::string_view name) {
  if (name == "scalar") return Backend::kScalar;
  if (name == "avx2") return Backend::kAvx2;
  if (name == "neon") return Backend::kNeon;
  return std::nullopt;
}

}  // namespace fcfnn::kernels
