#pragma once

// Data-parallel inner loops over lattice fields. Every kernel has a scalar
// reference implementation and, on x86-64, an AVX2 variant chosen at runtime.
// Both variants perform the same floating-point operations in the same order
// per output element, so results are bitwise identical across variants.

#include <cstddef>
#include <cstdint>
#include <string>

namespace imm::kernels {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  // out[k] = scale * (in[k-2s] - 8 in[k-s] + 8 in[k+s] - in[k+2s]),  k in [begin, end)
  void (*stencil_d1)(const double* in, double* out, std::size_t begin, std::size_t end, std::ptrdiff_t stride,
                     double scale);
  // out[k] = scale * (-in[k-2s] + 16 in[k-s] - 30 in[k] + 16 in[k+s] - in[k+2s])
  void (*stencil_d2)(const double* in, double* out, std::size_t begin, std::size_t end, std::ptrdiff_t stride,
                     double scale);
  // max |x[k]| over mask[k] != 0
  double (*masked_max_abs)(const double* x, const std::uint8_t* mask, std::size_t n);
  // sum of w[k] * x[k]^2 over mask[k] != 0, accumulated in four interleaved lanes
  double (*masked_weighted_sum_sq)(const double* x, const double* w, const std::uint8_t* mask, std::size_t n);
};

const KernelTable& scalar_table();
#if defined(IMM_HAVE_AVX2)
const KernelTable& avx2_table();
#endif

/// True when the running CPU can execute the AVX2 variants.
bool cpu_has_avx2();

/// Table in use. Defaults to the best supported ISA; IMMSTAB_ISA=scalar in the
/// environment forces the reference path.
const KernelTable& active();
void force(Isa isa);

std::string to_string(Isa isa);

}  // namespace imm::kernels
