// Compiled with -mavx2; only reached after a runtime CPU check.
#include <immintrin.h>

#include <cmath>

#include "namecf/kernels.hpp"

namespace namecf::kernels {
namespace {

double horizontal_sum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

void hadamard(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  const std::size_t n = out.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d va = _mm256_loadu_pd(a.data() + i);
    __m256d vb = _mm256_loadu_pd(b.data() + i);
    _mm256_storeu_pd(out.data() + i, _mm256_mul_pd(va, vb));
  }
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void csr_gather(std::span<const std::uint32_t> offsets, std::span<const std::uint32_t> cols,
                std::span<const double> weights, std::span<const double> x,
                std::span<double> out) {
  for (std::size_t r = 0; r + 1 < offsets.size(); ++r) {
    std::uint32_t e = offsets[r];
    const std::uint32_t end = offsets[r + 1];
    __m256d acc = _mm256_setzero_pd();
    for (; e + 4 <= end; e += 4) {
      __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(cols.data() + e));
      __m256d xv = _mm256_i32gather_pd(x.data(), idx, 8);
      __m256d wv = _mm256_loadu_pd(weights.data() + e);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(wv, xv));
    }
    double tail = 0.0;
    for (; e < end; ++e) tail += weights[e] * x[cols[e]];
    out[r] = horizontal_sum(acc) + tail;
  }
}

void affine(std::span<const double> in, double scale, double shift, std::span<double> out) {
  const std::size_t n = out.size();
  const __m256d vs = _mm256_set1_pd(scale);
  const __m256d vt = _mm256_set1_pd(shift);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(in.data() + i);
    _mm256_storeu_pd(out.data() + i, _mm256_add_pd(_mm256_mul_pd(vs, v), vt));
  }
  for (; i < n; ++i) out[i] = scale * in[i] + shift;
}

double l1_distance(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i));
    acc = _mm256_add_pd(acc, _mm256_andnot_pd(sign, d));
  }
  double total = horizontal_sum(acc);
  for (; i < n; ++i) total += std::abs(a[i] - b[i]);
  return total;
}

double sum(std::span<const double> a) {
  const std::size_t n = a.size();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a.data() + i));
  double total = horizontal_sum(acc);
  for (; i < n; ++i) total += a[i];
  return total;
}

}  // namespace

namespace detail {
const KernelTable kAvx2{"avx2", hadamard, csr_gather, affine, l1_distance, sum};
}

}  // namespace namecf::kernels
