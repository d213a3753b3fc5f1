#include <cmath>

#include "imm/kernels.hpp"

namespace imm::kernels {
namespace {

void stencil_d1(const double* in, double* out, std::size_t begin, std::size_t end, std::ptrdiff_t stride,
                double scale) {
  const std::ptrdiff_t s = stride;
  for (std::size_t k = begin; k < end; ++k) {
    const double* p = in + k;
    const double a = p[-2 * s] - 8.0 * p[-s];
    const double b = 8.0 * p[s] - p[2 * s];
    out[k] = scale * (a + b);
  }
}

void stencil_d2(const double* in, double* out, std::size_t begin, std::size_t end, std::ptrdiff_t stride,
                double scale) {
  const std::ptrdiff_t s = stride;
  for (std::size_t k = begin; k < end; ++k) {
    const double* p = in + k;
    const double a = 16.0 * p[-s] - p[-2 * s];
    const double b = 16.0 * p[s] - p[2 * s];
    out[k] = scale * ((a + b) - 30.0 * p[0]);
  }
}

double masked_max_abs(const double* x, const std::uint8_t* mask, std::size_t n) {
  double m = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (mask[k] && std::fabs(x[k]) > m) m = std::fabs(x[k]);
  }
  return m;
}

double masked_weighted_sum_sq(const double* x, const double* w, const std::uint8_t* mask, std::size_t n) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t k = 0; k < n; ++k) {
    const double t = mask[k] ? w[k] * (x[k] * x[k]) : 0.0;
    lane[k & 3] += t;
  }
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{Isa::scalar, stencil_d1, stencil_d2, masked_max_abs, masked_weighted_sum_sq};
  return table;
}

}  // namespace imm::kernels
