#include <cmath>

#include "namecf/kernels.hpp"

namespace namecf::kernels {
namespace {

void hadamard(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
}

void csr_gather(std::span<const std::uint32_t> offsets, std::span<const std::uint32_t> cols,
                std::span<const double> weights, std::span<const double> x,
                std::span<double> out) {
  for (std::size_t r = 0; r + 1 < offsets.size(); ++r) {
    double acc = 0.0;
    for (std::uint32_t e = offsets[r]; e < offsets[r + 1]; ++e) acc += weights[e] * x[cols[e]];
    out[r] = acc;
  }
}

void affine(std::span<const double> in, double scale, double shift, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = scale * in[i] + shift;
}

double l1_distance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
  return acc;
}

double sum(std::span<const double> a) {
  double acc = 0.0;
  for (double v : a) acc += v;
  return acc;
}

}  // namespace

namespace detail {
const KernelTable kScalar{"scalar", hadamard, csr_gather, affine, l1_distance, sum};
}

}  // namespace namecf::kernels
