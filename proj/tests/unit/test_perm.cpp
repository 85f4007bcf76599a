#include <random>

#include "doctest.h"
#include "sofic/error.hpp"
#include "sofic/perm.hpp"
#include "sofic/simd/kernels.hpp"
#include "support/oracles.hpp"

using namespace sofic;

TEST_CASE("permutation construction rejects non-bijections") {
  CHECK_THROWS_AS(Permutation({0, 0, 1}), Error);
  CHECK_THROWS_AS(Permutation({0, 3, 1}), Error);
  CHECK_THROWS_AS(Permutation(std::vector<std::uint32_t>{}), Error);
  CHECK(Permutation({2, 0, 1}).size() == 3);
}

TEST_CASE("compose applies the right factor first") {
  const Permutation p({1, 2, 0});
  const Permutation q({0, 2, 1});
  // p(q(0)) = 1, p(q(1)) = p(2) = 0, p(q(2)) = p(1) = 2
  CHECK(compose(p, q) == Permutation({1, 0, 2}));
  CHECK(compose(p, inverse(p)).is_identity());
  CHECK(compose(inverse(p), p).is_identity());
}

TEST_CASE("hamming and displacement") {
  CHECK(hamming(Permutation::identity(4), Permutation::transposition(4, 0, 1)) == ratio(1, 2));
  CHECK(displacement(Permutation::cyclic_shift(10, 3)) == Rational(1));
  CHECK(displacement(Permutation::identity(7)) == Rational(0));
  CHECK(Permutation::cyclic_shift(5, -1) == Permutation({4, 0, 1, 2, 3}));
}

TEST_CASE("extend_partial") {
  CHECK(extend_partial(PartialInjection{}, 3) == Permutation::identity(3));
  CHECK(extend_partial(PartialInjection({{0, 1}, {1, 2}}), 3) == Permutation({1, 2, 0}));
  CHECK_THROWS_AS(extend_partial(PartialInjection({{0, 1}, {1, 1}}), 3), Error);
  CHECK_THROWS_AS(extend_partial(PartialInjection({{0, 1}, {0, 2}}), 3), Error);
  CHECK_THROWS_AS(extend_partial(PartialInjection({{0, 5}}), 3), Error);

  const PartialInjection part({{0, 4}, {3, 1}});
  const Permutation a = extend_partial(part, 8, CompletionPolicy::SeededShuffle, 42);
  const Permutation b = extend_partial(part, 8, CompletionPolicy::SeededShuffle, 42);
  CHECK(a == b);
  CHECK(a(0) == 4);
  CHECK(a(3) == 1);
}

TEST_CASE("permutation group laws on random samples") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 40;
    const Permutation p(oracle::random_images(rng, n));
    const Permutation q(oracle::random_images(rng, n));
    const Permutation r(oracle::random_images(rng, n));
    CHECK(compose(compose(p, q), r) == compose(p, compose(q, r)));
    const Permutation pq = compose(p, q);
    CHECK(std::vector<std::uint32_t>(pq.images().begin(), pq.images().end()) == oracle::naive_compose(p, q));
    CHECK(hamming(p, q) == oracle::naive_hamming(p, q));
    CHECK(hamming(p, q) == hamming(q, p));
    CHECK(hamming(p, r) <= hamming(p, q) + hamming(q, r));
    // Bi-invariance of the normalized Hamming metric.
    CHECK(hamming(compose(r, p), compose(r, q)) == hamming(p, q));
    CHECK(hamming(compose(p, r), compose(q, r)) == hamming(p, q));
  }
}

TEST_CASE("simd kernels match the scalar reference") {
  if (!simd::avx2_available()) {
    MESSAGE("AVX2 not available; only the scalar table is exercised");
    return;
  }
  const auto& s = simd::scalar_kernels();
  const auto& v = simd::avx2_kernels();
  std::mt19937_64 rng(5);
  for (std::size_t n : {1U, 2U, 7U, 8U, 9U, 15U, 16U, 17U, 31U, 33U, 64U, 100U, 257U, 1000U}) {
    const auto p = oracle::random_images(rng, n);
    auto q = p;
    for (std::size_t i = 0; i + 1 < n; i += 3) std::swap(q[i], q[i + 1]);
    std::vector<std::uint32_t> a(n), b(n);
    s.compose(p.data(), q.data(), a.data(), n);
    v.compose(p.data(), q.data(), b.data(), n);
    CHECK(a == b);
    CHECK(s.count_mismatch(p.data(), q.data(), n) == v.count_mismatch(p.data(), q.data(), n));
    CHECK(s.count_moved(p.data(), n) == v.count_moved(p.data(), n));
    for (bool eq : {true, false}) {
      std::vector<std::uint8_t> fa(n, 0), fb(n, 0);
      s.mark(p.data(), q.data(), fa.data(), n, eq);
      v.mark(p.data(), q.data(), fb.data(), n, eq);
      CHECK(fa == fb);
    }
  }
}

TEST_CASE("library results do not depend on the kernel table") {
  std::mt19937_64 rng(9);
  const Permutation p(oracle::random_images(rng, 77));
  const Permutation q(oracle::random_images(rng, 77));
  simd::force_kernels(&simd::scalar_kernels());
  const auto c1 = compose(p, q);
  const auto h1 = hamming(p, q);
  simd::force_kernels(nullptr);
  CHECK(compose(p, q) == c1);
  CHECK(hamming(p, q) == h1);
}

TEST_CASE("rationals") {
  CHECK(parse_rational("3/10") == ratio(3, 10));
  CHECK(parse_rational("2") == Rational(2));
  CHECK(to_string(ratio(6, 100)) == "3/50");
  CHECK(to_decimal(ratio(1, 3), 4) == "0.3333");
  CHECK_THROWS(parse_rational("x"));
  CHECK_THROWS(parse_rational("1/0"));
}
