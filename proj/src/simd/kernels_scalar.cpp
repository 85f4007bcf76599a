#include "sofic/simd/kernels.hpp"

namespace sofic::simd {
namespace {

void compose_scalar(const std::uint32_t* p, const std::uint32_t* q, std::uint32_t* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = p[q[i]];
}

std::size_t count_mismatch_scalar(const std::uint32_t* p, const std::uint32_t* q, std::size_t n) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) count += p[i] != q[i];
  return count;
}

std::size_t count_moved_scalar(const std::uint32_t* p, std::size_t n) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) count += p[i] != i;
  return count;
}

void mark_scalar(const std::uint32_t* p, const std::uint32_t* q, std::uint8_t* flags, std::size_t n,
                 bool mark_equal) {
  for (std::size_t i = 0; i < n; ++i) flags[i] |= static_cast<std::uint8_t>((p[i] == q[i]) == mark_equal);
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{Isa::Scalar, "scalar", compose_scalar, count_mismatch_scalar,
                                 count_moved_scalar, mark_scalar};
  return table;
}

}  // namespace sofic::simd
