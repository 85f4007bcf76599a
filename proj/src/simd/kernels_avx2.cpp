// Compiled with -mavx2; only reached after a runtime CPUID check.
#include <immintrin.h>

#include "sofic/simd/kernels.hpp"

namespace sofic::simd {
namespace {

void compose_avx2(const std::uint32_t* p, const std::uint32_t* q, std::uint32_t* out, std::size_t n) {
  const auto* base = reinterpret_cast<const int*>(p);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256i idx = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(q + i));
    const __m256i v = _mm256_i32gather_epi32(base, idx, 4);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), v);
  }
  for (; i < n; ++i) out[i] = p[q[i]];
}

std::size_t count_mismatch_avx2(const std::uint32_t* p, const std::uint32_t* q, std::size_t n) {
  std::size_t equal = 0;
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i));
    const __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(q + i));
    const int mask = _mm256_movemask_ps(_mm256_castsi256_ps(_mm256_cmpeq_epi32(a, b)));
    equal += static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(mask)));
  }
  std::size_t mismatch = i - equal;
  for (; i < n; ++i) mismatch += p[i] != q[i];
  return mismatch;
}

std::size_t count_moved_avx2(const std::uint32_t* p, std::size_t n) {
  std::size_t fixed = 0;
  std::size_t i = 0;
  __m256i iota = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);
  const __m256i step = _mm256_set1_epi32(8);
  for (; i + 8 <= n; i += 8) {
    const __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i));
    const int mask = _mm256_movemask_ps(_mm256_castsi256_ps(_mm256_cmpeq_epi32(a, iota)));
    fixed += static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(mask)));
    iota = _mm256_add_epi32(iota, step);
  }
  std::size_t moved = i - fixed;
  for (; i < n; ++i) moved += p[i] != i;
  return moved;
}

void mark_avx2(const std::uint32_t* p, const std::uint32_t* q, std::uint8_t* flags, std::size_t n,
               bool mark_equal) {
  std::size_t i = 0;
  const unsigned flip = mark_equal ? 0u : 0xffu;
  for (; i + 8 <= n; i += 8) {
    const __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i));
    const __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(q + i));
    const unsigned mask =
        static_cast<unsigned>(_mm256_movemask_ps(_mm256_castsi256_ps(_mm256_cmpeq_epi32(a, b)))) ^ flip;
    if (mask == 0) continue;
    for (unsigned lane = 0; lane < 8; ++lane) flags[i + lane] |= static_cast<std::uint8_t>((mask >> lane) & 1u);
  }
  for (; i < n; ++i) flags[i] |= static_cast<std::uint8_t>((p[i] == q[i]) == mark_equal);
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{Isa::Avx2, "avx2", compose_avx2, count_mismatch_avx2, count_moved_avx2,
                                 mark_avx2};
  return table;
}

}  // namespace sofic::simd
