#pragma once

// Dense vector kernels used by the PageRank power iteration. Every variant
// computes the same function as the scalar reference up to floating-point
// reassociation of the reductions.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace namecf::kernels {

struct KernelTable {
  std::string_view name;

  /// out[i] = a[i] * b[i]
  void (*hadamard)(std::span<const double> a, std::span<const double> b,
                   std::span<double> out);

  /// CSR row-gather: out[r] = sum_{e in row r} weights[e] * x[cols[e]].
  /// offsets has rows + 1 entries.
  void (*csr_gather)(std::span<const std::uint32_t> offsets,
                     std::span<const std::uint32_t> cols,
                     std::span<const double> weights, std::span<const double> x,
                     std::span<double> out);

  /// out[i] = scale * in[i] + shift
  void (*affine)(std::span<const double> in, double scale, double shift,
                 std::span<double> out);

  /// sum |a[i] - b[i]|
  double (*l1_distance)(std::span<const double> a, std::span<const double> b);

  double (*sum)(std::span<const double> a);
};

const KernelTable& scalar();

/// nullptr when not compiled in or not supported by the running CPU.
const KernelTable* avx2();

/// Best supported table. `NAMECF_SIMD=scalar|avx2` forces a choice
/// (falls back to scalar when the request cannot be honored).
const KernelTable& active();

namespace detail {
extern const KernelTable kScalar;
#if defined(NAMECF_HAVE_AVX2)
extern const KernelTable kAvx2;
#endif
}  // namespace detail

}  // namespace namecf::kernels
