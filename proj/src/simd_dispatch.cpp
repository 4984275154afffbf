#include "qk/simd.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace qk::simd {

bool avx2_available() {
#if defined(QK_HAVE_AVX2)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

const Kernels* select_default() {
  if (const char* env = std::getenv("QK_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return &scalar_kernels();
#if defined(QK_HAVE_AVX2)
    if (std::strcmp(env, "avx2") == 0 && avx2_available())
      return &avx2_kernels();
#endif
  }
#if defined(QK_HAVE_AVX2)
  if (avx2_available()) return &avx2_kernels();
#endif
  return &scalar_kernels();
}

std::atomic<const Kernels*> g_override{nullptr};

}  // namespace

const Kernels& active() {
  if (const Kernels* k = g_override.load(std::memory_order_acquire)) return *k;
  static const Kernels* selected = select_default();
  return *selected;
}

void set_active(const Kernels* k) {
  g_override.store(k, std::memory_order_release);
}

#if !defined(QK_HAVE_AVX2)
const Kernels& avx2_kernels() { return scalar_kernels(); }
#endif

}  // namespace qk::simd
