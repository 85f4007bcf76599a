#include "sofic/perm.hpp"

#include <limits>
#include <random>
#include <string>

#include "sofic/error.hpp"
#include "sofic/simd/kernels.hpp"

namespace sofic {

Permutation::Permutation(std::vector<std::uint32_t> images) : images_(std::move(images)) {
  if (images_.empty()) fail(ErrorCode::InvalidPermutation, "carrier must be nonempty");
  std::vector<bool> seen(images_.size(), false);
  for (std::size_t i = 0; i < images_.size(); ++i) {
    const std::uint32_t v = images_[i];
    if (v >= images_.size() || seen[v]) {
      fail(ErrorCode::InvalidPermutation,
           "image table is not a bijection (index " + std::to_string(i) + " -> " + std::to_string(v) + ")");
    }
    seen[v] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  if (n == 0) fail(ErrorCode::InvalidPermutation, "carrier must be nonempty");
  std::vector<std::uint32_t> images(n);
  for (std::size_t i = 0; i < n; ++i) images[i] = static_cast<std::uint32_t>(i);
  return Permutation(Trusted{}, std::move(images));
}

Permutation Permutation::transposition(std::size_t n, std::uint32_t i, std::uint32_t j) {
  if (i >= n || j >= n) fail(ErrorCode::InvalidPermutation, "transposition point outside carrier");
  Permutation p = identity(n);
  std::swap(p.images_[i], p.images_[j]);
  return p;
}

Permutation Permutation::cyclic_shift(std::size_t n, std::int64_t shift) {
  if (n == 0) fail(ErrorCode::InvalidPermutation, "carrier must be nonempty");
  const auto m = static_cast<std::int64_t>(n);
  const std::int64_t s = ((shift % m) + m) % m;
  std::vector<std::uint32_t> images(n);
  for (std::int64_t i = 0; i < m; ++i) images[i] = static_cast<std::uint32_t>((i + s) % m);
  return Permutation(Trusted{}, std::move(images));
}

Permutation Permutation::from_trusted(std::vector<std::uint32_t> images) {
  return Permutation(Trusted{}, std::move(images));
}

bool Permutation::is_identity() const {
  return simd::active_kernels().count_moved(images_.data(), images_.size()) == 0;
}

namespace {
void require_same_carrier(const Permutation& p, const Permutation& q) {
  if (p.size() != q.size()) {
    fail(ErrorCode::CarrierMismatch, "carrier sizes " + std::to_string(p.size()) + " and " + std::to_string(q.size()));
  }
}
}  // namespace

Permutation compose(const Permutation& p, const Permutation& q) {
  require_same_carrier(p, q);
  std::vector<std::uint32_t> out(p.size());
  simd::active_kernels().compose(p.images().data(), q.images().data(), out.data(), p.size());
  return Permutation::from_trusted(std::move(out));
}

Permutation inverse(const Permutation& p) {
  std::vector<std::uint32_t> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[p(i)] = static_cast<std::uint32_t>(i);
  return Permutation::from_trusted(std::move(out));
}

Rational hamming(const Permutation& p, const Permutation& q) {
  require_same_carrier(p, q);
  const std::size_t diff = simd::active_kernels().count_mismatch(p.images().data(), q.images().data(), p.size());
  return Rational(static_cast<std::int64_t>(diff), static_cast<std::int64_t>(p.size()));
}

Rational displacement(const Permutation& p) {
  const std::size_t moved = simd::active_kernels().count_moved(p.images().data(), p.size());
  return Rational(static_cast<std::int64_t>(moved), static_cast<std::int64_t>(p.size()));
}

void seeded_shuffle(std::vector<std::uint32_t>& values, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = values.size(); i > 1; --i) {
    // uniform in [0, i) by rejection
    const std::uint64_t bound = i;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t r = rng();
    while (r >= limit) r = rng();
    std::swap(values[i - 1], values[r % bound]);
  }
}

Permutation extend_partial(const PartialInjection& partial, std::size_t n, CompletionPolicy policy,
                           std::uint64_t seed) {
  if (n == 0) fail(ErrorCode::InvalidPermutation, "carrier must be nonempty");
  constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> images(n, kUnset);
  std::vector<bool> used(n, false);
  for (const auto& [src, dst] : partial.pairs()) {
    if (src >= n || dst >= n) {
      fail(ErrorCode::InconsistentPartial,
           "pair " + std::to_string(src) + "->" + std::to_string(dst) + " outside carrier " + std::to_string(n));
    }
    if (images[src] != kUnset && images[src] != dst) {
      fail(ErrorCode::InconsistentPartial, "source " + std::to_string(src) + " mapped twice");
    }
    if (images[src] == dst) continue;
    if (used[dst]) fail(ErrorCode::InconsistentPartial, "target " + std::to_string(dst) + " hit twice");
    images[src] = dst;
    used[dst] = true;
  }
  std::vector<std::uint32_t> free_targets;
  for (std::uint32_t t = 0; t < n; ++t) {
    if (!used[t]) free_targets.push_back(t);
  }
  if (policy == CompletionPolicy::SeededShuffle) seeded_shuffle(free_targets, seed);
  std::size_t next = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (images[s] == kUnset) images[s] = free_targets[next++];
  }
  return Permutation::from_trusted(std::move(images));
}

}  // namespace sofic
