#include <cstdlib>
#include <string_view>

#include "stepflow/kernels.hpp"

namespace stepflow::kernels {

#if defined(STEPFLOW_HAVE_AVX2)
extern const Table kAvx2Table;
#endif

const Table* avx2() {
#if defined(STEPFLOW_HAVE_AVX2)
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok ? &kAvx2Table : nullptr;
#else
  return nullptr;
#endif
}

const Table& active() {
  static const Table* chosen = [] {
    const char* env = std::getenv("STEPFLOW_SIMD");
    if (env != nullptr && std::string_view(env) == "scalar") return &scalar();
    const Table* v = avx2();
    return v != nullptr ? v : &scalar();
  }();
  return *chosen;
}

}  // namespace stepflow::kernels
