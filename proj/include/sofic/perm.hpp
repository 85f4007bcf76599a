#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "sofic/rational.hpp"

namespace sofic {

/// A bijection of the carrier {0..n-1}, stored as its image table.
class Permutation {
 public:
  /// Validates that `images` is a bijection of {0..n-1} with n >= 1.
  explicit Permutation(std::vector<std::uint32_t> images);

  static Permutation identity(std::size_t n);
  static Permutation transposition(std::size_t n, std::uint32_t i, std::uint32_t j);
  /// i -> i + shift (mod n).
  static Permutation cyclic_shift(std::size_t n, std::int64_t shift);
  /// Skips validation; callers guarantee the bijection invariant.
  static Permutation from_trusted(std::vector<std::uint32_t> images);

  std::size_t size() const { return images_.size(); }
  std::uint32_t operator()(std::size_t i) const { return images_[i]; }
  std::span<const std::uint32_t> images() const { return images_; }
  bool is_identity() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  struct Trusted {};
  Permutation(Trusted, std::vector<std::uint32_t> images) : images_(std::move(images)) {}

  std::vector<std::uint32_t> images_;
};

/// (p * q)(i) = p(q(i)): q is applied first.
Permutation compose(const Permutation& p, const Permutation& q);
Permutation inverse(const Permutation& p);
/// Normalized Hamming distance |{i : p(i) != q(i)}| / n.
Rational hamming(const Permutation& p, const Permutation& q);
/// Hamming distance to the identity.
Rational displacement(const Permutation& p);

/// Partial injective map on a carrier of size n.
class PartialInjection {
 public:
  PartialInjection() = default;
  explicit PartialInjection(std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs)
      : pairs_(std::move(pairs)) {}

  void add(std::uint32_t source, std::uint32_t target) { pairs_.emplace_back(source, target); }
  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs() const { return pairs_; }
  bool empty() const { return pairs_.empty(); }

 private:
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs_;
};

enum class CompletionPolicy {
  /// Unmatched sources in ascending order go to unmatched targets in ascending order.
  CyclicFill,
  /// Unmatched targets are shuffled with a seeded generator first.
  SeededShuffle,
};

/// Completes a partial injection to a permutation of {0..n-1}. Throws
/// InconsistentPartial when sources or targets repeat or fall outside the carrier.
Permutation extend_partial(const PartialInjection& partial, std::size_t n,
                           CompletionPolicy policy = CompletionPolicy::CyclicFill, std::uint64_t seed = 0);

/// Deterministic Fisher-Yates shuffle; identical output on every platform.
void seeded_shuffle(std::vector<std::uint32_t>& values, std::uint64_t seed);

}  // namespace sofic
