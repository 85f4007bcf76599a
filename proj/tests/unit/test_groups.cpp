#include <random>

#include "doctest.h"
#include "sofic/actions.hpp"
#include "sofic/bytes.hpp"
#include "sofic/error.hpp"
#include "sofic/groups.hpp"
#include "support/oracles.hpp"

using namespace sofic;

namespace {

GroupPtr z() { return std::make_shared<FreeAbelianGroup>(1); }
GroupPtr z2() { return std::make_shared<FiniteCyclicGroup>(2); }

std::shared_ptr<WreathGroup> lamplighter_n(int n) {
  auto zn = std::make_shared<FiniteCyclicGroup>(n);
  return std::make_shared<WreathGroup>(z2(), zn, std::make_shared<LeftTranslation>(zn));
}

template <class Check>
void all_triples(const Group& g, const std::vector<GroupElement>& els, Check check) {
  for (const auto& a : els) {
    for (const auto& b : els) {
      for (const auto& c : els) check(g, a, b, c);
    }
  }
}

void group_axioms(const Group& g, const GroupElement& a, const GroupElement& b, const GroupElement& c) {
  CHECK(g.mul(g.mul(a, b), c) == g.mul(a, g.mul(b, c)));
  CHECK(g.mul(a, g.identity()) == a);
  CHECK(g.mul(g.inv(a), a) == g.identity());
}

}  // namespace

TEST_CASE("free abelian and cyclic arithmetic") {
  auto g = std::make_shared<FreeAbelianGroup>(2);
  CHECK(g->mul(g->element({1, -2}), g->element({3, 5})) == g->element({4, 3}));
  CHECK(g->inv(g->element({1, -2})) == g->element({-1, 2}));
  CHECK(g->describe() == "Z^2");
  FiniteCyclicGroup c(10);
  CHECK(c.mul(c.element(7), c.element(5)) == c.element(2));
  CHECK(c.element(-3) == c.element(7));
  CHECK(c.order() == 10U);
}

TEST_CASE("free group words reduce freely") {
  FreeGroup f(2);
  CHECK(f.parse_word("aA") == f.identity());
  CHECK(f.mul(f.parse_word("ab"), f.parse_word("Ba")) == f.parse_word("aa"));
  CHECK(f.format(f.inv(f.parse_word("abA"))) == "aBA");
  CHECK(f.format(f.identity()) == "e");
  CHECK_THROWS_AS(f.parse_word("ac"), Error);
  std::mt19937_64 rng(3);
  std::vector<GroupElement> els;
  for (int i = 0; i < 12; ++i) {
    std::vector<std::int32_t> letters;
    for (int k = 0; k < 5; ++k) {
      const int l = static_cast<int>(rng() % 2) + 1;
      letters.push_back(rng() % 2 ? l : -l);
    }
    els.push_back(f.word(letters));
  }
  all_triples(f, els, group_axioms);
}

TEST_CASE("canonical encoding round-trips and is injective") {
  auto lamp = lamplighter_n(3);
  const auto els = enumerate_group(*lamp, 100);
  REQUIRE(els.size() == 24);
  std::set<std::string> codes;
  for (const auto& e : els) {
    const std::string bytes = encode(e);
    CHECK(decode(bytes) == e);
    codes.insert(bytes);
  }
  CHECK(codes.size() == 24);

  FreeGroup f(3);
  const auto w = f.parse_word("abCCa");
  CHECK(decode(encode(w)) == w);
  CHECK(decode(encode(z()->identity())) == z()->identity());
  CHECK_THROWS_AS(decode(std::string("\x63")), Error);
  CHECK_THROWS_AS(decode(std::string("\x02")), Error);
  // A non-reduced word must not decode.
  ByteWriter bw;
  bw.put_byte(static_cast<std::uint8_t>(FamilyTag::Free));
  bw.put_varint(2);
  bw.put_signed(1);
  bw.put_signed(-1);
  CHECK_THROWS_AS(decode(bw.str()), Error);
}

TEST_CASE("lamplighter over Z/3 matches a bitmask model") {
  auto w = lamplighter_n(3);
  oracle::LampOracle model{3};
  auto zn = std::dynamic_pointer_cast<const FiniteCyclicGroup>(w->acting());
  auto to_model = [&](const GroupElement& e) {
    const auto& we = *e.get_if<WreathElement>();
    std::uint32_t bits = 0;
    for (const auto& p : we.support.points) {
      bits |= 1U << static_cast<int>(point_element(p).get_if<Residue>()->value);
    }
    return oracle::LampOracle::El{bits, static_cast<int>(we.h->get_if<Residue>()->value)};
  };
  const auto els = enumerate_group(*w, 100);
  for (const auto& a : els) {
    for (const auto& b : els) CHECK(to_model(w->mul(a, b)) == model.mul(to_model(a), to_model(b)));
  }
  CHECK(w->order() == 24U);
  all_triples(*w, std::vector<GroupElement>(els.begin(), els.begin() + 8), group_axioms);
}

TEST_CASE("lamplighter over Z") {
  auto zz = z();
  auto w = std::make_shared<WreathGroup>(z2(), zz, std::make_shared<IntegerTranslation>(1));
  const auto lamp0 = w->element({{int_point(0), FiniteCyclicGroup(2).element(1)}}, zz->identity());
  const auto shift = w->element({}, std::dynamic_pointer_cast<const FreeAbelianGroup>(zz)->element({1}));
  // shift . lamp0 . shift^{-1} lights the lamp at 1.
  const auto moved = w->mul(w->mul(shift, lamp0), w->inv(shift));
  CHECK(moved == w->element({{int_point(1), FiniteCyclicGroup(2).element(1)}}, zz->identity()));
  CHECK(w->mul(lamp0, lamp0) == w->identity());
  const Window b = ball(w, {lamp0, shift}, 2);
  CHECK(b.size() == 10);
  CHECK(b.symmetric());
  CHECK(b.contains_identity());
}

TEST_CASE("direct sums keep canonical supports") {
  auto ds = std::make_shared<DirectSumGroup>(std::make_shared<FiniteCyclicGroup>(3), std::make_shared<LabelSpace>(4));
  FiniteCyclicGroup c3(3);
  const auto a = ds->element({{label_point(2), c3.element(1)}, {label_point(0), c3.element(2)}});
  const auto b = ds->element({{label_point(2), c3.element(2)}});
  CHECK(ds->mul(a, b) == ds->element({{label_point(0), c3.element(2)}}));
  CHECK(ds->at(a, label_point(1)) == c3.identity());
  CHECK(ds->order() == 81U);
  CHECK(decode(encode(a)) == a);
}

TEST_CASE("perm wreath metric: triangle inequality and bi-invariance") {
  auto g = std::make_shared<PermWreathGroup>(std::make_shared<FiniteCyclicGroup>(2), 2);
  const auto els = enumerate_group(*g, 100);
  REQUIRE(els.size() == 8);
  for (const auto& u : els) {
    for (const auto& v : els) {
      CHECK(metric_dga(*g, u, v) == metric_dga(*g, v, u));
      CHECK((metric_dga(*g, u, v) == Rational(0)) == (u == v));
      for (const auto& w : els) {
        CHECK(metric_dga(*g, u, w) <= metric_dga(*g, u, v) + metric_dga(*g, v, w));
        CHECK(metric_dga(*g, g->mul(w, u), g->mul(w, v)) == metric_dga(*g, u, v));
        CHECK(metric_dga(*g, g->mul(u, w), g->mul(v, w)) == metric_dga(*g, u, v));
      }
    }
  }
}

TEST_CASE("perm wreath multiplication against the definition") {
  auto base = std::make_shared<FiniteCyclicGroup>(3);
  PermWreathGroup g(base, 3);
  SemidirectElement u{{base->element(1), base->element(0), base->element(2)}, Permutation({1, 2, 0})};
  SemidirectElement v{{base->element(2), base->element(2), base->element(0)}, Permutation({0, 2, 1})};
  const auto uv = *g.mul(GroupElement(u), GroupElement(v)).template get_if<SemidirectElement>();
  // f_{uv}(i) = f_u(i) + f_v(sigma_u^{-1}(i)); sigma_u^{-1} = (2, 0, 1).
  CHECK(uv.f[0] == base->element(1 + 0));
  CHECK(uv.f[1] == base->element(0 + 2));
  CHECK(uv.f[2] == base->element(2 + 2));
  CHECK(uv.sigma == compose(u.sigma, v.sigma));
  CHECK(g.mul(g.inv(GroupElement(u)), GroupElement(u)) == g.identity());
}

TEST_CASE("windows, balls and closures") {
  auto f2 = std::make_shared<FreeGroup>(2);
  CHECK(ball(f2, f2->generators(), 1).size() == 5);
  CHECK(ball(f2, f2->generators(), 2).size() == 17);
  const Window w(z(), {z()->identity()});
  CHECK(w.symmetric());
  CHECK_THROWS_AS(Window(z(), {z()->identity(), z()->identity()}), Error);

  auto lamp = lamplighter_n(3);
  std::vector<GroupElement> lamps;
  for (int i = 0; i < 3; ++i) {
    lamps.push_back(lamp->element({{element_point(lamp->acting()->generators()[0]), FiniteCyclicGroup(2).element(1)}},
                                  lamp->acting()->identity()));
  }
  CHECK(subgroup_closure(*lamp, {lamps[0]}, 10).size() == 2);
  CHECK(subgroup_closure(*lamp, lamp->generators(), 100).size() == 24);
  CHECK_THROWS_AS(subgroup_closure(*lamp, lamp->generators(), 10), Error);
  CHECK_THROWS_AS(enumerate_group(*z(), 10), Error);
}

TEST_CASE("finite permutation groups") {
  auto s3 = std::make_shared<FinitePermGroup>(3, std::vector<Permutation>{Permutation({1, 0, 2}), Permutation({1, 2, 0})});
  CHECK(s3->order() == 6U);
  CHECK(s3->elements().size() == 6);
  all_triples(*s3, s3->elements(), group_axioms);
  auto c3 = std::make_shared<FinitePermGroup>(3, std::vector<Permutation>{Permutation({1, 2, 0})});
  CHECK_FALSE(c3->accepts(GroupElement(Permutation({1, 0, 2}))));
  CHECK_THROWS_AS(c3->require(GroupElement(Permutation({1, 0, 2}))), Error);
}
