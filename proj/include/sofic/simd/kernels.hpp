#pragma once

// Data-parallel inner loops over permutation image tables. Every kernel has a
// scalar reference and, on x86-64, an AVX2 variant; the variant is chosen once
// at runtime from CPUID and can be pinned for equivalence testing.

#include <cstddef>
#include <cstdint>
#include <span>

namespace sofic::simd {

enum class Isa { Scalar, Avx2 };

struct KernelTable {
  Isa isa;
  const char* name;
  /// out[i] = p[q[i]]
  void (*compose)(const std::uint32_t* p, const std::uint32_t* q, std::uint32_t* out, std::size_t n);
  /// |{i : p[i] != q[i]}|
  std::size_t (*count_mismatch)(const std::uint32_t* p, const std::uint32_t* q, std::size_t n);
  /// |{i : p[i] != i}|
  std::size_t (*count_moved)(const std::uint32_t* p, std::size_t n);
  /// flags[i] |= (p[i] == q[i]) when mark_equal, else flags[i] |= (p[i] != q[i])
  void (*mark)(const std::uint32_t* p, const std::uint32_t* q, std::uint8_t* flags, std::size_t n,
               bool mark_equal);
};

const KernelTable& scalar_kernels();
bool avx2_available();
/// Throws std::runtime_error when the CPU or build lacks AVX2.
const KernelTable& avx2_kernels();

/// Kernels used by the library; resolved on first call.
const KernelTable& active_kernels();
/// Pins the active table (tests and benchmarking); pass nullptr to restore
/// automatic selection.
void force_kernels(const KernelTable* table);

}  // namespace sofic::simd
