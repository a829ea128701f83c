#include <cstdlib>
#include <cstring>

#include "taco/kernels.hpp"

namespace taco::kernels {

#if defined(TACO_HAVE_AVX2_TU)
const KernelTable* avx2_kernels_table();
#endif

const KernelTable* avx2_kernels() {
#if defined(TACO_HAVE_AVX2_TU)
  if (__builtin_cpu_supports("avx2")) return avx2_kernels_table();
#endif
  return nullptr;
}

const KernelTable& active_kernels() {
  static const KernelTable* selected = [] {
    const char* env = std::getenv("TACO_KERNELS");
    if (env && std::strcmp(env, "scalar") == 0) return &scalar_kernels();
    if (const KernelTable* t = avx2_kernels()) return t;
    return &scalar_kernels();
  }();
  return *selected;
}

}  // namespace taco::kernels
