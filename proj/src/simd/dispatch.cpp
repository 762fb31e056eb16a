#include <cstdlib>
#include <cstring>

#include "primforge/simd/kernels.hpp"

namespace pf::simd {

#ifdef PRIMFORGE_HAVE_AVX2
const Kernels* avx2_kernels_impl();
#endif

const Kernels* avx2_kernels() {
#ifdef PRIMFORGE_HAVE_AVX2
  static const bool ok = __builtin_cpu_supports("avx2");
  return ok ? avx2_kernels_impl() : nullptr;
#else
  return nullptr;
#endif
}

const Kernels& active_kernels() {
  static const Kernels* chosen = [] {
    const char* env = std::getenv("PRIMFORGE_SIMD");
    if (env && std::strcmp(env, "scalar") == 0) return &scalar_kernels();
    const Kernels* k = avx2_kernels();
    return k ? k : &scalar_kernels();
  }();
  return *chosen;
}

}  // namespace pf::simd
