#include "imm/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace imm::kernels {

bool cpu_has_avx2() {
#if defined(IMM_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool has = __builtin_cpu_supports("avx2");
  return has;
#else
  return false;
#endif
}

namespace {

const KernelTable* pick() {
  const char* env = std::getenv("IMMSTAB_ISA");
  if (env && std::strcmp(env, "scalar") == 0) return &scalar_table();
#if defined(IMM_HAVE_AVX2)
  if (cpu_has_avx2()) return &avx2_table();
#endif
  return &scalar_table();
}

std::atomic<const KernelTable*>& slot() {
  static std::atomic<const KernelTable*> current{pick()};
  return current;
}

}  // namespace

const KernelTable& active() { return *slot().load(std::memory_order_acquire); }

void force(Isa isa) {
#if defined(IMM_HAVE_AVX2)
  if (isa == Isa::avx2 && cpu_has_avx2()) {
    slot().store(&avx2_table(), std::memory_order_release);
    return;
  }
#endif
  (void)isa;
  slot().store(&scalar_table(), std::memory_order_release);
}

std::string to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

}  // namespace imm::kernels
