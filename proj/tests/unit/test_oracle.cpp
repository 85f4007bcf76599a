#include <random>

#include "doctest.h"
#include "sofic/construct.hpp"
#include "sofic/error.hpp"
#include "sofic/oracle.hpp"
#include "support/oracles.hpp"

using namespace sofic;

namespace {

std::shared_ptr<FreeAbelianGroup> z() { return std::make_shared<FreeAbelianGroup>(1); }

Window interval(const std::shared_ptr<FreeAbelianGroup>& g, int lo, int hi) {
  std::vector<GroupElement> els;
  for (int i = lo; i <= hi; ++i) els.push_back(g->element({i}));
  return Window(g, els);
}

}  // namespace

TEST_CASE("oracle finds the full carrier for an exact cyclic map") {
  auto g = z();
  IntegerTranslation a(1);
  const Window F = interval(g, -1, 1);
  const Window dom = F.united(F.product(F));
  std::vector<Permutation> perms;
  for (const auto& e : dom.elements()) perms.push_back(Permutation::cyclic_shift(5, e.get_if<IntVector>()->coords[0]));
  const SoficMap m(g, 5, dom.elements(), perms);
  const PointWindow E = int_window(0, 1);
  const auto r = oracle_max_witness(m, a, F, E);
  CHECK(r.best_S_size == 5);
  CHECK(r.search_space_exhausted);
  REQUIRE(r.best_witness.has_value());
  CHECK(oracle_verify(m, *r.best_witness, a, F, E, ratio(1, 10)));
  CHECK(check_orbit_witness(m, *r.best_witness, a, F, E, ratio(1, 10)).pass_witness);
}

TEST_CASE("oracle on a map that wraps too early") {
  // phi(1) is a 3-cycle. With E = {0..3} the chain pi_{s+1}(x) = pi_s(x - 1)
  // forces pi_s(3) = pi_s(0) once all three points are kept, so at most two
  // points survive.
  auto g = z();
  IntegerTranslation a(1);
  const Window F = interval(g, -1, 1);
  const Window dom = F.united(F.product(F));
  std::vector<Permutation> perms;
  for (const auto& e : dom.elements()) perms.push_back(Permutation::cyclic_shift(3, e.get_if<IntVector>()->coords[0]));
  const SoficMap m(g, 3, dom.elements(), perms);
  CHECK(oracle_max_witness(m, a, F, int_window(0, 1)).best_S_size == 3);
  CHECK(oracle_max_witness(m, a, F, int_window(0, 2)).best_S_size == 3);
  const auto two = oracle_max_witness(m, a, F, int_window(0, 3));
  CHECK(two.best_S_size == 2);
  CHECK(two.search_space_exhausted);
  REQUIRE(two.best_witness.has_value());
  const auto n = oracle::naive_witness(m, *two.best_witness, a, F.elements());
  CHECK(n.violations == 0);
  CHECK(n.injective);
}

TEST_CASE("oracle caps") {
  auto g = z();
  IntegerTranslation a(1);
  const auto c = amenable_construct(a, interval(g, 0, 11).elements(), interval(g, -1, 1), int_window(0, 0));
  try {
    oracle_max_witness(c.map, a, interval(g, -1, 1), int_window(0, 0));
    FAIL("expected a cap overflow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CapOverflow);
  }
}

TEST_CASE("constructor witnesses never beat the oracle") {
  auto g = z();
  IntegerTranslation a(1);
  for (int n = 1; n <= 6; ++n) {
    for (int r = 1; r <= 2; ++r) {
      const Window F = interval(g, -r, r);
      if (F.size() > 5) continue;
      const PointWindow E = int_window(0, 1);
      const auto c = amenable_construct(a, interval(g, 0, n - 1).elements(), F, E);
      const auto best = oracle_max_witness(c.map, a, F, E);
      CHECK(c.witness.S.size() <= best.best_S_size);
    }
  }
  // Strictly suboptimal: cyclic fill closes {0..4} into a 5-cycle, which the
  // oracle labels consistently everywhere, while the constructor keeps only
  // the interior.
  const Window F = interval(g, -1, 1);
  const PointWindow E = int_window(0, 0);
  const auto c = amenable_construct(a, interval(g, 0, 4).elements(), F, E);
  CHECK(c.witness.S.size() == 3);
  CHECK(oracle_max_witness(c.map, a, F, E).best_S_size == 5);
}

TEST_CASE("the two witness verifiers agree on random inputs") {
  auto g = z();
  IntegerTranslation a(1);
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + rng() % 6;
    const Window F = interval(g, -1, 1);
    const Window dom = F.united(F.product(F));
    std::vector<Permutation> perms;
    for (const auto& e : dom.elements()) {
      perms.push_back(g->is_identity(e) ? Permutation::identity(n) : Permutation(oracle::random_images(rng, n)));
    }
    const SoficMap m(g, n, dom.elements(), perms);
    const PointWindow E = int_window(0, static_cast<int>(rng() % 3));
    OrbitWitness w;
    w.E = E;
    w.labels_size = 3;
    for (std::uint32_t s = 0; s < n; ++s) {
      if (rng() % 4 == 0) continue;
      w.S.push_back(s);
      auto labels = std::vector<std::uint32_t>{0, 1, 2};
      std::shuffle(labels.begin(), labels.end(), rng);
      labels.resize(E.size());
      w.pi.push_back(labels);
    }
    const Rational eps = ratio(1 + static_cast<std::int64_t>(rng() % 5), 6);
    const bool v1 = check_orbit_witness(m, w, a, F, E, eps).pass_witness;
    const bool v2 = oracle_verify(m, w, a, F, E, eps);
    CHECK(v1 == v2);
    const auto best = oracle_max_witness(m, a, F, E);
    REQUIRE(best.best_witness.has_value());
    CHECK(check_orbit_witness(m, *best.best_witness, a, F, E, eps).equivariance_violations == 0);
    CHECK((w.S.size() <= best.best_S_size || !v1));
  }
}
