#include <atomic>
#include <stdexcept>

#include "sofic/simd/kernels.hpp"

namespace sofic::simd {

#ifdef SOFIC_HAVE_AVX2_KERNELS
const KernelTable& avx2_table();
#endif

bool avx2_available() {
#ifdef SOFIC_HAVE_AVX2_KERNELS
  static const bool available = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") != 0;
  }();
  return available;
#else
  return false;
#endif
}

const KernelTable& avx2_kernels() {
#ifdef SOFIC_HAVE_AVX2_KERNELS
  if (avx2_available()) return avx2_table();
#endif
  throw std::runtime_error("AVX2 kernels are not available on this machine");
}

namespace {
std::atomic<const KernelTable*> forced{nullptr};
}

const KernelTable& active_kernels() {
  if (const KernelTable* t = forced.load(std::memory_order_acquire)) return *t;
  static const KernelTable& automatic = avx2_available() ? avx2_kernels() : scalar_kernels();
  return automatic;
}

void force_kernels(const KernelTable* table) { forced.store(table, std::memory_order_release); }

}  // namespace sofic::simd
