#include <random>

#include "doctest.h"
#include "sofic/construct.hpp"
#include "sofic/error.hpp"
#include "support/oracles.hpp"

using namespace sofic;

namespace {

std::shared_ptr<FreeAbelianGroup> z() { return std::make_shared<FreeAbelianGroup>(1); }

Window interval(const GroupPtr& g, int lo, int hi) {
  const auto& za = dynamic_cast<const FreeAbelianGroup&>(*g);
  std::vector<GroupElement> els;
  for (int i = lo; i <= hi; ++i) els.push_back(za.element({i}));
  return Window(g, els);
}

std::vector<GroupElement> integers(const FreeAbelianGroup& g, int lo, int hi) {
  std::vector<GroupElement> out;
  for (int i = lo; i <= hi; ++i) out.push_back(g.element({i}));
  return out;
}

std::shared_ptr<WreathGroup> lamplighter3() {
  auto z3 = std::make_shared<FiniteCyclicGroup>(3);
  return std::make_shared<WreathGroup>(std::make_shared<FiniteCyclicGroup>(2), z3,
                                       std::make_shared<LeftTranslation>(z3));
}

void agrees_with_oracles(const Construction& c, const Action& a, const Window& F, const PointWindow& E,
                         const Rational& eps) {
  const auto mult = check_multiplicative(c.map, F, eps);
  CHECK(mult.mult_defect_max == oracle::naive_defect(c.map, F.elements()));
  const auto wit = check_orbit_witness(c.map, c.witness, a, F, E, eps);
  const auto naive = oracle::naive_witness(c.map, c.witness, a, F.elements());
  CHECK(naive.injective);
  CHECK(wit.witness_fraction == naive.fraction);
  CHECK(wit.equivariance_violations == naive.violations);
}

}  // namespace

TEST_CASE("amenable construction on Z") {
  auto g = z();
  IntegerTranslation a(1);
  const Window F = interval(g, -3, 3);
  const PointWindow E = int_window(-2, 2);
  const auto c = amenable_construct(a, integers(*g, 0, 99), F, E);
  CHECK(c.map.carrier_size() == 100);
  CHECK(c.witness.S.size() == 94);
  CHECK(c.witness.S.front() == 3);
  CHECK(c.witness.S.back() == 96);
  agrees_with_oracles(c, a, F, E, ratio(1, 10));
  const auto r = check_orbit_witness(c.map, c.witness, a, F, E, ratio(1, 10));
  CHECK(r.pass_witness);
  CHECK(check_multiplicative(c.map, F, ratio(1, 10)).mult_defect_max <= ratio(9, 100));

  // Seeded completion only touches the points the partial action leaves free.
  const auto s1 = amenable_construct(a, integers(*g, 0, 19), interval(g, -1, 1), E, CompletionPolicy::SeededShuffle, 3);
  const auto s2 = amenable_construct(a, integers(*g, 0, 19), interval(g, -1, 1), E, CompletionPolicy::SeededShuffle, 3);
  CHECK(s1.map.permutations() == s2.map.permutations());
  CHECK(s1.witness == s2.witness);
  CHECK(check_orbit_witness(s1.map, s1.witness, a, interval(g, -1, 1), E, ratio(1, 5)).equivariance_violations == 0);

  CHECK_THROWS_AS(amenable_construct(a, integers(*g, 0, 9), interval(g, 0, 1), E), Error);
}

TEST_CASE("amenable construction on Z^2 with a box") {
  auto g = std::make_shared<FreeAbelianGroup>(2);
  IntegerTranslation a(2);
  const Window F = ball(g, g->generators(), 1);
  const PointWindow E({a.point({0, 0}), a.point({1, 0})});
  const auto c = amenable_construct(a, folner_box(2, 6), F, E);
  CHECK(c.map.carrier_size() == 36);
  CHECK(c.witness.S.size() == 16);
  agrees_with_oracles(c, a, F, E, ratio(1, 2));
}

TEST_CASE("free group construction") {
  auto f2 = std::make_shared<FreeGroup>(2);
  LeftTranslation a(f2);
  const Window F = ball(f2, f2->generators(), 1);
  const PointWindow E({element_point(f2->identity())});
  const auto c = free_construct(a, F, E);
  CHECK(c.map.carrier_size() == 120);
  agrees_with_oracles(c, a, F, E, ratio(1, 10));
  CHECK(check_multiplicative(c.map, F, ratio(1, 10)).mult_defect_max == Rational(0));
  CHECK(check_separation(c.map, F, ratio(1, 10)).separation_min == Rational(1));
  CHECK(oracle::naive_min_separation(c.map, F.elements()) == Rational(1));
  CHECK(c.witness.S.size() == 120);

  const Window big = ball(f2, f2->generators(), 3);
  try {
    free_construct(a, big, E, CompletionPolicy::CyclicFill, 0, 1000);
    FAIL("expected a cap overflow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CapOverflow);
  }
}

TEST_CASE("providers") {
  auto lamp = lamplighter3();
  FiniteRegularProvider reg(lamp);
  CHECK(reg.order() == 24);
  const Window all(lamp, enumerate_group(*lamp, 100));
  const auto m = reg.map_on(all.united(all.product(all)));
  CHECK(oracle::naive_defect(m, all.elements()) == Rational(0));
  CHECK(oracle::naive_min_separation(m, all.elements()) == Rational(1));

  // Mixed-radix path for a direct sum over labels.
  auto ds = std::make_shared<DirectSumGroup>(std::make_shared<FiniteCyclicGroup>(3), std::make_shared<LabelSpace>(3));
  FiniteRegularProvider dsp(ds);
  CHECK(dsp.order() == 27);
  const Window dall(ds, enumerate_group(*ds, 100));
  const auto dm = dsp.map_on(dall);
  CHECK(oracle::naive_defect(dm, dall.elements()) == Rational(0));
  CHECK(oracle::naive_min_separation(dm, dall.elements()) == Rational(1));
  std::set<std::uint32_t> idx;
  for (const auto& e : dall.elements()) idx.insert(dsp.index_of(e));
  CHECK(idx.size() == 27);

  auto g = z();
  QuotientChainProvider q(g, 10);
  const Window F = interval(g, -4, 4);
  const auto qm = q.provide(F, ratio(1, 10));
  CHECK(qm.carrier_size() == 10);
  CHECK(oracle::naive_defect(qm, F.elements()) == Rational(0));
  CHECK(oracle::naive_min_separation(qm, F.elements()) == Rational(1));
  CHECK(oracle::naive_min_separation(q.map_on(interval(g, 0, 10)), {g->element({10})}) == Rational(0));
}

TEST_CASE("coset construction on the lamplighter over Z/3") {
  auto lamp = lamplighter3();
  auto a = CosetAction::wreath_base(lamp);
  FiniteRegularProvider reg(lamp);
  const Window F = ball(lamp, lamp->generators(), 1);
  const PointWindow E(*a->finite_points());
  const auto c = coset_construct(*a, reg, F, E, ratio(1, 10));
  CHECK(c.closure_size <= 8);
  agrees_with_oracles(c, *a, F, E, ratio(1, 10));
  const auto r = check_orbit_witness(c.map, c.witness, *a, F, E, ratio(1, 10));
  CHECK(r.pass_witness);
  CHECK(r.equivariance_violations == 0);
  for (const auto& row : c.witness.pi) CHECK(std::set<std::uint32_t>(row.begin(), row.end()).size() == E.size());
}

TEST_CASE("coset construction through the trivial subgroup of Z") {
  auto g = z();
  auto a = CosetAction::trivial(g);
  QuotientChainProvider q(g, 10);
  const Window F = interval(g, -1, 1);
  const PointWindow E = int_window(-1, 1);
  const auto c = coset_construct(*a, q, F, E, ratio(1, 10));
  CHECK(c.map.carrier_size() == 10);
  CHECK(check_orbit_witness(c.map, c.witness, *a, F, E, ratio(1, 10)).pass_witness);
  agrees_with_oracles(c, *a, F, E, ratio(1, 10));
}

TEST_CASE("combination over orbits and quotients") {
  auto g = z();
  auto z3 = std::make_shared<FiniteCyclicGroup>(3);
  auto left3 = std::make_shared<LeftTranslation>(z3);
  auto line = std::make_shared<IntegerTranslation>(1);
  auto circle = std::make_shared<QuotientAction>(left3, reduce_mod(g, 3));
  DisjointUnionAction u({line, circle});
  const Window F = interval(g, -1, 1);

  const auto c1 = amenable_construct(*line, integers(*g, 0, 9), F, int_window(0, 0));
  const Window F3(z3, enumerate_group(*z3, 10));
  const auto inner = amenable_construct(*left3, enumerate_group(*z3, 10), F3, PointWindow(*left3->finite_points()));
  const auto c2 = restrict_or_quotient(inner, reduce_mod(g, 3), F);
  CHECK(check_orbit_witness(c2.map, c2.witness, *circle, F, c2.witness.E, ratio(1, 10)).witness_fraction == Rational(1));

  const auto c = combine_orbits(u, {&c1, &c2}, F);
  CHECK(c.map.carrier_size() == 30);
  std::vector<Point> pts;
  for (const auto& p : c1.witness.E.points()) pts.push_back(u.embed(0, p));
  for (const auto& p : c2.witness.E.points()) pts.push_back(u.embed(1, p));
  const PointWindow E(pts);
  const auto r = check_orbit_witness(c.map, c.witness, u, F, E, ratio(1, 5) + ratio(1, 100));
  CHECK(r.witness_fraction == ratio(8, 10));
  CHECK(r.equivariance_violations == 0);
  agrees_with_oracles(c, u, F, E, ratio(1, 2));

  const Rational d1 = check_multiplicative(c1.map, F, Rational(1)).mult_defect_max;
  const Rational d2 = check_multiplicative(c2.map, F, Rational(1)).mult_defect_max;
  CHECK(check_multiplicative(c.map, F, Rational(1)).mult_defect_max <= Rational(1) - (Rational(1) - d1) * (Rational(1) - d2));
  CHECK(combine_part_eps(ratio(1, 10), 2) == ratio(1, 20));
}

TEST_CASE("embedding of the permutational wreath product") {
  auto z2 = std::make_shared<FiniteCyclicGroup>(2);
  auto target = std::make_shared<PermWreathGroup>(z2, 3);
  const auto els = enumerate_group(*target, 100);
  REQUIRE(els.size() == 48);
  const Window all2(z2, enumerate_group(*z2, 10));
  const auto base = FiniteRegularProvider(z2).map_on(all2);
  std::vector<Permutation> emb;
  for (const auto& u : els) emb.push_back(wreath_embed(base, *target, u));
  for (std::size_t i = 0; i < els.size(); i += 5) {
    for (std::size_t j = 0; j < els.size(); ++j) {
      CHECK(oracle::naive_hamming(emb[i], emb[j]) == metric_dga(*target, els[i], els[j]));
      CHECK(wreath_embed(base, *target, target->mul(els[i], els[j])) == compose(emb[i], emb[j]));
    }
  }
}

TEST_CASE("wreath map with an exact stage") {
  auto lamp = lamplighter3();
  auto h = lamp->acting();
  auto act = std::static_pointer_cast<const Action>(lamp->action());
  const Window Fh(h, enumerate_group(*h, 10));
  const PointWindow Eh(*act->finite_points());
  WreathStage stage{amenable_construct(*act, Fh.elements(), Fh, Eh), Fh, Rational(0), nullptr};
  stage.base_provider = std::make_shared<FiniteRegularProvider>(stage_base_group(*lamp, stage));
  CHECK(measured_stage_eps(stage) == Rational(0));

  const Window F(lamp, enumerate_group(*lamp, 100));
  const auto res = wreath_sofic_map(*lamp, F, stage, ratio(1, 10));
  CHECK(res.mult.mult_defect_max == Rational(0));
  CHECK(res.separation.separation_min == Rational(1));
  CHECK(oracle::naive_defect(res.map, F.elements()) == Rational(0));
  std::set<std::vector<std::uint32_t>> images;
  for (const auto& e : F.elements()) {
    const auto& p = oracle::lookup(res.map, e);
    images.insert(std::vector<std::uint32_t>(p.images().begin(), p.images().end()));
  }
  CHECK(images.size() == 24);
}
