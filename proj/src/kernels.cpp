#include "namecf/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace namecf::kernels {

const KernelTable& scalar() { return detail::kScalar; }

const KernelTable* avx2() {
#if defined(NAMECF_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &detail::kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable* chosen = [] {
    const char* env = std::getenv("NAMECF_SIMD");
    const std::string_view request = env ? env : "auto";
    if (request == "scalar") return &scalar();
    if (const auto* table = avx2()) return table;
    return &scalar();
  }();
  return *chosen;
}

}  // namespace namecf::kernels
