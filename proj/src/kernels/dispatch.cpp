// Copyright 2026 The refute-absa Authors
// SPDX-License-Identifier: Apache-2.0

#include <atomic>
#include <cstdlib>
#include <string>

#include "refute/error.hpp"
#include "refute/kernels/kernels.hpp"

namespace refute::kernels {

#if !REFUTE_HAVE_AVX2
namespace avx2 {
const KernelTable* table() noexcept { return nullptr; }
}  // namespace avx2
#endif

namespace {

const KernelTable* pick_default() {
  const char* env = std::getenv("REFUTE_SIMD");
  if (env != nullptr && std::string(env) == "scalar") return &scalar::table();
  if (avx2_supported()) return avx2::table();
  return &scalar::table();
}

std::atomic<const KernelTable*>& slot() {
  static std::atomic<const KernelTable*> current{pick_default()};
  return current;
}

}  // namespace

std::string_view to_string(Backend b) noexcept {
  return b == Backend::Avx2 ? "avx2" : "scalar";
}

bool avx2_supported() noexcept {
#if REFUTE_HAVE_AVX2 && (defined(__GNUC__) || defined(__clang__))
  return avx2::table() != nullptr && __builtin_cpu_supports("avx2") &&
         __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend active_backend() noexcept { return active().backend; }

void set_backend(Backend b) {
  if (b == Backend::Scalar) {
    slot().store(&scalar::table());
    return;
  }
  if (!avx2_supported()) throw config_error("AVX2 kernels unavailable on this host");
  slot().store(avx2::table());
}

const KernelTable& active() noexcept { return *slot().load(std::memory_order_relaxed); }

}  // namespace refute::kernels
