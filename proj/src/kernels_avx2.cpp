// Compiled with -mavx2 only (no FMA) so every lane rounds exactly like the
// scalar reference in kernels_scalar.cpp.

#include <immintrin.h>

#include <cmath>
#include <cstring>

#include "imm/kernels.hpp"

namespace imm::kernels {
namespace {

void stencil_d1(const double* in, double* out, std::size_t begin, std::size_t end, std::ptrdiff_t stride,
                double scale) {
  const std::ptrdiff_t s = stride;
  const __m256d eight = _mm256_set1_pd(8.0);
  const __m256d vs = _mm256_set1_pd(scale);
  std::size_t k = begin;
  for (; k + 4 <= end; k += 4) {
    const double* p = in + k;
    const __m256d m2 = _mm256_loadu_pd(p - 2 * s);
    const __m256d m1 = _mm256_loadu_pd(p - s);
    const __m256d p1 = _mm256_loadu_pd(p + s);
    const __m256d p2 = _mm256_loadu_pd(p + 2 * s);
    const __m256d a = _mm256_sub_pd(m2, _mm256_mul_pd(eight, m1));
    const __m256d b = _mm256_sub_pd(_mm256_mul_pd(eight, p1), p2);
    _mm256_storeu_pd(out + k, _mm256_mul_pd(vs, _mm256_add_pd(a, b)));
  }
  for (; k < end; ++k) {
    const double* p = in + k;
    const double a = p[-2 * s] - 8.0 * p[-s];
    const double b = 8.0 * p[s] - p[2 * s];
    out[k] = scale * (a + b);
  }
}

void stencil_d2(const double* in, double* out, std::size_t begin, std::size_t end, std::ptrdiff_t stride,
                double scale) {
  const std::ptrdiff_t s = stride;
  const __m256d sixteen = _mm256_set1_pd(16.0);
  const __m256d thirty = _mm256_set1_pd(30.0);
  const __m256d vs = _mm256_set1_pd(scale);
  std::size_t k = begin;
  for (; k + 4 <= end; k += 4) {
    const double* p = in + k;
    const __m256d m2 = _mm256_loadu_pd(p - 2 * s);
    const __m256d m1 = _mm256_loadu_pd(p - s);
    const __m256d c = _mm256_loadu_pd(p);
    const __m256d p1 = _mm256_loadu_pd(p + s);
    const __m256d p2 = _mm256_loadu_pd(p + 2 * s);
    const __m256d a = _mm256_sub_pd(_mm256_mul_pd(sixteen, m1), m2);
    const __m256d b = _mm256_sub_pd(_mm256_mul_pd(sixteen, p1), p2);
    const __m256d r = _mm256_sub_pd(_mm256_add_pd(a, b), _mm256_mul_pd(thirty, c));
    _mm256_storeu_pd(out + k, _mm256_mul_pd(vs, r));
  }
  for (; k < end; ++k) {
    const double* p = in + k;
    const double a = 16.0 * p[-s] - p[-2 * s];
    const double b = 16.0 * p[s] - p[2 * s];
    out[k] = scale * ((a + b) - 30.0 * p[0]);
  }
}

inline __m256d load_mask(const std::uint8_t* mask) {
  // 4 bytes -> 4 all-ones / all-zeros 64-bit lanes
  int packed;
  std::memcpy(&packed, mask, sizeof packed);
  const __m128i bytes = _mm_cvtsi32_si128(packed);
  const __m256i wide = _mm256_cvtepu8_epi64(bytes);
  const __m256i on = _mm256_cmpgt_epi64(wide, _mm256_setzero_si256());
  return _mm256_castsi256_pd(on);
}

double masked_max_abs(const double* x, const std::uint8_t* mask, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d vmax = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d a = _mm256_andnot_pd(sign, _mm256_loadu_pd(x + k));
    vmax = _mm256_max_pd(vmax, _mm256_and_pd(a, load_mask(mask + k)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, vmax);
  double m = 0.0;
  for (double l : lanes) m = l > m ? l : m;
  for (; k < n; ++k) {
    if (mask[k] && std::fabs(x[k]) > m) m = std::fabs(x[k]);
  }
  return m;
}

double masked_weighted_sum_sq(const double* x, const double* w, const std::uint8_t* mask, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d xv = _mm256_loadu_pd(x + k);
    const __m256d t = _mm256_mul_pd(_mm256_loadu_pd(w + k), _mm256_mul_pd(xv, xv));
    acc = _mm256_add_pd(acc, _mm256_and_pd(t, load_mask(mask + k)));
  }
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  for (; k < n; ++k) {
    const double t = mask[k] ? w[k] * (x[k] * x[k]) : 0.0;
    lane[k & 3] += t;
  }
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{Isa::avx2, stencil_d1, stencil_d2, masked_max_abs, masked_weighted_sum_sq};
  return table;
}

}  // namespace imm::kernels
