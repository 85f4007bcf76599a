#include "doctest.h"
#include "sofic/actions.hpp"
#include "sofic/error.hpp"

using namespace sofic;

namespace {

std::shared_ptr<FreeAbelianGroup> z() { return std::make_shared<FreeAbelianGroup>(1); }

std::shared_ptr<WreathGroup> lamplighter3() {
  auto z3 = std::make_shared<FiniteCyclicGroup>(3);
  return std::make_shared<WreathGroup>(std::make_shared<FiniteCyclicGroup>(2), z3,
                                       std::make_shared<LeftTranslation>(z3));
}

void action_laws(const Action& a, const std::vector<GroupElement>& els, const std::vector<Point>& pts) {
  const auto& g = *a.group();
  for (const auto& x : pts) {
    CHECK(a.apply(g.identity(), x) == x);
    for (const auto& u : els) {
      for (const auto& v : els) CHECK(a.apply(g.mul(u, v), x) == a.apply(u, a.apply(v, x)));
    }
  }
}

}  // namespace

TEST_CASE("integer translation") {
  IntegerTranslation t(1);
  auto g = std::dynamic_pointer_cast<const FreeAbelianGroup>(t.group());
  CHECK(t.apply(g->element({3}), int_point(-1)) == int_point(2));
  CHECK(t.format_point(int_point(-4)) == "-4");
  std::vector<GroupElement> els;
  for (int i = -2; i <= 2; ++i) els.push_back(g->element({i}));
  action_laws(t, els, int_window(-3, 3).points());
}

TEST_CASE("left translation of a finite group lists its points") {
  auto w = lamplighter3();
  LeftTranslation l(w);
  const auto pts = l.finite_points();
  REQUIRE(pts.has_value());
  CHECK(pts->size() == 24);
  const auto els = enumerate_group(*w, 100);
  action_laws(l, std::vector<GroupElement>(els.begin(), els.begin() + 6), *pts);
}

TEST_CASE("coset actions and sections") {
  auto w = lamplighter3();
  auto lamps = CosetAction::wreath_base(w);
  const auto pts = lamps->finite_points();
  REQUIRE(pts.has_value());
  CHECK(pts->size() == 3);
  for (const auto& x : *pts) {
    // sigma(x) lies in the coset x.
    CHECK(lamps->coset_canonical(lamps->section(x)) == x);
  }
  const auto els = enumerate_group(*w, 100);
  action_laws(*lamps, els, *pts);

  // The same subgroup given by generators gives the same orbit structure.
  std::vector<GroupElement> gens;
  for (const auto& e : els) {
    if (w->acting()->is_identity(*e.get_if<WreathElement>()->h)) gens.push_back(e);
  }
  CHECK(gens.size() == 8);
  auto finite = CosetAction::finite_subgroup(w, gens, 100);
  REQUIRE(finite->finite_points().has_value());
  CHECK(finite->finite_points()->size() == 3);
  for (const auto& e : els) CHECK(finite->in_subgroup(e) == lamps->in_subgroup(e));
  action_laws(*finite, std::vector<GroupElement>(els.begin(), els.begin() + 8), *finite->finite_points());
  CHECK_THROWS_AS(CosetAction::finite_subgroup(w, gens, 4), Error);
}

TEST_CASE("trivial coset action shares the translation codec") {
  auto zz = z();
  auto c = CosetAction::trivial(zz);
  CHECK(c->is_left_translation());
  CHECK(c->apply(zz->element({2}), int_point(5)) == int_point(7));
  CHECK(c->section(int_point(4)) == zz->element({4}));
}

TEST_CASE("quotient, restriction and disjoint union") {
  auto zz = z();
  auto z3 = std::make_shared<FiniteCyclicGroup>(3);
  auto q = std::make_shared<QuotientAction>(std::make_shared<LeftTranslation>(z3), reduce_mod(zz, 3));
  CHECK(q->apply(zz->element({5}), element_point(z3->element(1))) == element_point(z3->element(0)));

  auto r = std::make_shared<RestrictionAction>(std::make_shared<IntegerTranslation>(1), scale_hom(zz, 2));
  CHECK(r->apply(zz->element({3}), int_point(1)) == int_point(7));

  DisjointUnionAction u({std::make_shared<IntegerTranslation>(1), q});
  const Point p = u.embed(1, element_point(z3->element(2)));
  CHECK(u.split(p).first == 1);
  CHECK(u.apply(zz->element({1}), p) == u.embed(1, element_point(z3->element(0))));
  CHECK(u.apply(zz->element({1}), u.embed(0, int_point(9))) == u.embed(0, int_point(10)));
  CHECK_FALSE(u.finite_points().has_value());

  CHECK_THROWS_AS(QuotientAction(std::make_shared<LeftTranslation>(z3), reduce_mod(zz, 4)), Error);
  CHECK_THROWS_AS(reduce_mod(std::make_shared<FiniteCyclicGroup>(10), 3), Error);
}

TEST_CASE("natural action of a permutation group") {
  auto s3 = std::make_shared<FinitePermGroup>(3, std::vector<Permutation>{Permutation({1, 0, 2}), Permutation({1, 2, 0})});
  NaturalFiniteAction n(s3);
  CHECK(n.apply(GroupElement(Permutation({1, 2, 0})), label_point(2)) == label_point(0));
  action_laws(n, s3->elements(), *n.finite_points());
}

TEST_CASE("windows and Folner boxes") {
  CHECK_THROWS_AS(PointWindow({int_point(1), int_point(1)}), Error);
  const auto e = int_window(-2, 2);
  CHECK(e.size() == 5);
  CHECK(e.index_of(int_point(0)) == 2);
  CHECK(e.index_of(int_point(9)) == 5);
  const auto box = folner_box(2, 3);
  CHECK(box.size() == 9);
  CHECK(box.front() == FreeAbelianGroup(2).element({0, 0}));
  CHECK(box[1] == FreeAbelianGroup(2).element({0, 1}));
}
