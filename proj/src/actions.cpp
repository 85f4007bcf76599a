#include "sofic/actions.hpp"

#include <algorithm>
#include <set>

#include "sofic/bytes.hpp"
#include "sofic/error.hpp"

namespace sofic {

Homomorphism identity_hom(GroupPtr group) {
  return Homomorphism{group, group, [](const GroupElement& g) { return g; }, "id"};
}

Homomorphism reduce_mod(GroupPtr source, std::int64_t modulus) {
  auto target = std::make_shared<FiniteCyclicGroup>(modulus);
  if (const auto* cyc = dynamic_cast<const FiniteCyclicGroup*>(source.get())) {
    if (cyc->modulus() % modulus != 0) {
      fail(ErrorCode::Contract, "Z/" + std::to_string(modulus) + " is not a quotient of " + source->describe());
    }
  } else if (const auto* za = dynamic_cast<const FreeAbelianGroup*>(source.get()); za == nullptr || za->rank() != 1) {
    fail(ErrorCode::FamilyMismatch, "reduction mod n needs Z or a finite cyclic group, got " + source->describe());
  }
  auto map = [source, target](const GroupElement& g) {
    source->require(g, "reduction argument");
    if (const auto* v = g.get_if<IntVector>()) return target->element(v->coords[0]);
    return target->element(g.get_if<Residue>()->value);
  };
  return Homomorphism{source, target, map, "mod " + std::to_string(modulus)};
}

Homomorphism scale_hom(GroupPtr source, std::int64_t factor) {
  const auto* za = dynamic_cast<const FreeAbelianGroup*>(source.get());
  if (za == nullptr) fail(ErrorCode::FamilyMismatch, "scaling needs a free abelian group, got " + source->describe());
  if (factor == 0) fail(ErrorCode::Contract, "scale factor must be nonzero");
  auto map = [source, factor](const GroupElement& g) {
    source->require(g, "scaling argument");
    IntVector v = *g.get_if<IntVector>();
    for (auto& c : v.coords) c *= factor;
    return GroupElement(std::move(v));
  };
  return Homomorphism{source, source, map, "times " + std::to_string(factor)};
}

Homomorphism wreath_top(GroupPtr wreath) {
  const auto* w = dynamic_cast<const WreathGroup*>(wreath.get());
  if (w == nullptr) fail(ErrorCode::FamilyMismatch, "wreath projection needs a wreath product, got " + wreath->describe());
  auto map = [wreath](const GroupElement& g) {
    wreath->require(g, "wreath projection argument");
    return *g.get_if<WreathElement>()->h;
  };
  return Homomorphism{wreath, w->acting(), map, "top"};
}

// ---------------------------------------------------------------------------

Point LeftTranslation::apply(const GroupElement& g, const Point& x) const {
  const GroupElement y = point_element(x);
  group()->require(y, "point");
  return element_point(group()->mul(g, y));
}

std::string LeftTranslation::describe() const { return "left(" + group()->describe() + ")"; }

std::string LeftTranslation::format_point(const Point& p) const { return group()->format(point_element(p)); }

std::optional<std::vector<Point>> LeftTranslation::finite_points() const {
  const auto order = group()->order();
  if (!order) return std::nullopt;
  std::vector<Point> out;
  for (const auto& e : enumerate_group(*group(), 1000000)) out.push_back(element_point(e));
  return out;
}

IntegerTranslation::IntegerTranslation(std::size_t rank)
    : Action(std::make_shared<FreeAbelianGroup>(rank)), rank_(rank) {}

Point IntegerTranslation::apply(const GroupElement& g, const Point& x) const {
  const GroupElement y = point_element(x);
  group()->require(y, "point");
  return element_point(group()->mul(g, y));
}

std::string IntegerTranslation::describe() const { return "translation(Z^" + std::to_string(rank_) + ")"; }

std::string IntegerTranslation::format_point(const Point& p) const { return group()->format(point_element(p)); }

Point IntegerTranslation::point(std::vector<std::int64_t> coords) const {
  if (coords.size() != rank_) fail(ErrorCode::FamilyMismatch, "point has wrong number of coordinates");
  return element_point(GroupElement(IntVector{std::move(coords)}));
}

// ---------------------------------------------------------------------------

CosetAction::CosetAction(GroupPtr group, Membership in_subgroup, Canonical canonical, std::string subgroup_name,
                         std::vector<GroupElement> subgroup_generators)
    : Action(std::move(group)),
      in_subgroup_(std::move(in_subgroup)),
      canonical_(std::move(canonical)),
      subgroup_name_(std::move(subgroup_name)),
      subgroup_generators_(std::move(subgroup_generators)) {}

std::shared_ptr<CosetAction> CosetAction::finite_subgroup(GroupPtr group, std::vector<GroupElement> generators,
                                                          std::size_t cap) {
  for (const auto& g : generators) group->require(g, "subgroup generator");
  auto members = std::make_shared<std::vector<GroupElement>>(subgroup_closure(*group, generators, cap));
  auto keys = std::make_shared<std::set<std::string>>();
  for (const auto& n : *members) keys->insert(encode(n));
  std::string name = "<";
  for (std::size_t i = 0; i < generators.size(); ++i) name += (i ? "," : "") + group->format(generators[i]);
  name += ">";
  auto membership = [keys](const GroupElement& g) { return keys->count(encode(g)) != 0; };
  auto canonical = [group, members](const GroupElement& g) {
    GroupElement best = g;
    std::string best_key = encode(g);
    for (const auto& n : *members) {
      GroupElement gn = group->mul(g, n);
      std::string key = encode(gn);
      if (key < best_key) {
        best_key = std::move(key);
        best = std::move(gn);
      }
    }
    return best;
  };
  return std::make_shared<CosetAction>(group, membership, canonical, name, std::move(generators));
}

std::shared_ptr<CosetAction> CosetAction::wreath_base(GroupPtr wreath) {
  const auto* w = dynamic_cast<const WreathGroup*>(wreath.get());
  if (w == nullptr) fail(ErrorCode::FamilyMismatch, "lamp subgroup needs a wreath product, got " + wreath->describe());
  std::vector<GroupElement> gens;
  for (const auto& g : w->generators()) {
    if (w->acting()->is_identity(*g.get_if<WreathElement>()->h)) gens.push_back(g);
  }
  auto membership = [wreath](const GroupElement& g) {
    wreath->require(g, "membership argument");
    const auto* w = static_cast<const WreathGroup*>(wreath.get());
    return w->acting()->is_identity(*g.get_if<WreathElement>()->h);
  };
  auto canonical = [wreath](const GroupElement& g) {
    wreath->require(g, "coset argument");
    return GroupElement(WreathElement{FiniteSupport{}, *g.get_if<WreathElement>()->h});
  };
  return std::make_shared<CosetAction>(wreath, membership, canonical, "lamps", std::move(gens));
}

std::shared_ptr<CosetAction> CosetAction::trivial(GroupPtr group) {
  auto membership = [group](const GroupElement& g) { return group->is_identity(g); };
  auto canonical = [](const GroupElement& g) { return g; };
  return std::make_shared<CosetAction>(group, membership, canonical, "trivial");
}

GroupElement CosetAction::section(const Point& x) const {
  GroupElement r = point_element(x);
  group()->require(r, "coset representative");
  if (!(canonical_(r) == r)) {
    fail(ErrorCode::Membership, "point " + group()->format(r) + " is not the canonical representative of its coset");
  }
  return r;
}

Point CosetAction::apply(const GroupElement& g, const Point& x) const {
  group()->require(g, "acting element");
  return coset_canonical(group()->mul(g, section(x)));
}

Point CosetAction::coset_canonical(const GroupElement& g) const {
  group()->require(g, "coset argument");
  return element_point(canonical_(g));
}

std::string CosetAction::describe() const { return "cosets(" + group()->describe() + "/" + subgroup_name_ + ")"; }

std::string CosetAction::format_point(const Point& p) const {
  return group()->format(point_element(p)) + (subgroup_name_ == "trivial" ? "" : "N");
}

std::optional<std::vector<Point>> CosetAction::finite_points() const {
  if (!group()->order()) return std::nullopt;
  std::set<Point> out;
  for (const auto& g : enumerate_group(*group(), 1000000)) out.insert(coset_canonical(g));
  return std::vector<Point>(out.begin(), out.end());
}

// ---------------------------------------------------------------------------

NaturalFiniteAction::NaturalFiniteAction(GroupPtr group) : Action(std::move(group)) {
  if (dynamic_cast<const FinitePermGroup*>(this->group().get()) == nullptr) {
    fail(ErrorCode::FamilyMismatch, "natural action needs a permutation group, got " + this->group()->describe());
  }
}

Point NaturalFiniteAction::apply(const GroupElement& g, const Point& x) const {
  group()->require(g, "acting element");
  const auto& p = *g.get_if<Permutation>();
  const std::uint32_t i = point_label(x);
  if (i >= p.size()) fail(ErrorCode::Decode, "point " + std::to_string(i) + " outside the carrier");
  return label_point(p(i));
}

std::string NaturalFiniteAction::describe() const { return "natural(" + group()->describe() + ")"; }

std::string NaturalFiniteAction::format_point(const Point& p) const { return std::to_string(point_label(p)); }

std::optional<std::vector<Point>> NaturalFiniteAction::finite_points() const {
  const auto degree = static_cast<const FinitePermGroup*>(group().get())->degree();
  std::vector<Point> out;
  for (std::size_t i = 0; i < degree; ++i) out.push_back(label_point(static_cast<std::uint32_t>(i)));
  return out;
}

// ---------------------------------------------------------------------------

RestrictionAction::RestrictionAction(ActionPtr inner, Homomorphism inclusion)
    : Action(inclusion.source), inner_(std::move(inner)), hom_(std::move(inclusion)) {
  if (!hom_.target->same_as(*inner_->group())) {
    fail(ErrorCode::FamilyMismatch, "inclusion lands in " + hom_.target->describe() + ", action is by " +
                                        inner_->group()->describe());
  }
}

Point RestrictionAction::apply(const GroupElement& g, const Point& x) const { return inner_->apply(hom_(g), x); }

std::string RestrictionAction::describe() const { return "restrict(" + inner_->describe() + "," + hom_.name + ")"; }

QuotientAction::QuotientAction(ActionPtr inner, Homomorphism quotient)
    : Action(quotient.source), inner_(std::move(inner)), hom_(std::move(quotient)) {
  if (!hom_.target->same_as(*inner_->group())) {
    fail(ErrorCode::FamilyMismatch, "quotient lands in " + hom_.target->describe() + ", action is by " +
                                        inner_->group()->describe());
  }
}

Point QuotientAction::apply(const GroupElement& g, const Point& x) const { return inner_->apply(hom_(g), x); }

std::string QuotientAction::describe() const { return "quotient(" + inner_->describe() + "," + hom_.name + ")"; }

// ---------------------------------------------------------------------------

DisjointUnionAction::DisjointUnionAction(std::vector<ActionPtr> parts)
    : Action(parts.empty() ? nullptr : parts.front()->group()), parts_(std::move(parts)) {
  if (parts_.empty()) fail(ErrorCode::Contract, "disjoint union needs at least one part");
  for (const auto& p : parts_) {
    if (!p->group()->same_as(*group())) {
      fail(ErrorCode::FamilyMismatch, "disjoint union parts are acted on by different groups");
    }
  }
}

Point DisjointUnionAction::embed(std::size_t part, const Point& inner) const {
  if (part >= parts_.size()) fail(ErrorCode::Decode, "part index out of range");
  ByteWriter w;
  w.put_varint(part);
  w.put_bytes(inner.bytes);
  return Point{std::move(w).str()};
}

std::pair<std::size_t, Point> DisjointUnionAction::split(const Point& p) const {
  ByteReader r(p.bytes);
  const std::size_t part = r.get_varint();
  if (part >= parts_.size()) fail(ErrorCode::Decode, "part index out of range");
  return {part, Point{p.bytes.substr(r.position())}};
}

Point DisjointUnionAction::apply(const GroupElement& g, const Point& x) const {
  const auto [part, inner] = split(x);
  return embed(part, parts_[part]->apply(g, inner));
}

std::string DisjointUnionAction::describe() const {
  std::string out = "union(";
  for (std::size_t i = 0; i < parts_.size(); ++i) out += (i ? "," : "") + parts_[i]->describe();
  return out + ")";
}

std::string DisjointUnionAction::format_point(const Point& p) const {
  const auto [part, inner] = split(p);
  return std::to_string(part) + ":" + parts_[part]->format_point(inner);
}

std::optional<std::vector<Point>> DisjointUnionAction::finite_points() const {
  std::vector<Point> out;
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    const auto pts = parts_[i]->finite_points();
    if (!pts) return std::nullopt;
    for (const auto& p : *pts) out.push_back(embed(i, p));
  }
  return out;
}

// ---------------------------------------------------------------------------

PointWindow::PointWindow(std::vector<Point> points) : points_(std::move(points)) {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!index_.emplace(points_[i], i).second) fail(ErrorCode::Contract, "point window lists a point twice");
  }
}

std::size_t PointWindow::index_of(const Point& p) const {
  const auto it = index_.find(p);
  return it == index_.end() ? points_.size() : it->second;
}

std::vector<GroupElement> folner_box(std::size_t rank, std::size_t side) {
  if (side == 0) fail(ErrorCode::Contract, "box side must be positive");
  std::vector<GroupElement> out;
  std::vector<std::int64_t> c(rank, 0);
  while (true) {
    out.emplace_back(IntVector{c});
    std::size_t i = rank;
    while (i > 0) {
      --i;
      if (static_cast<std::size_t>(++c[i]) < side) break;
      c[i] = 0;
      if (i == 0) return out;
    }
    if (rank == 0) return out;
  }
}

PointWindow int_window(std::int64_t lo, std::int64_t hi) {
  std::vector<Point> pts;
  for (std::int64_t v = lo; v <= hi; ++v) pts.push_back(int_point(v));
  return PointWindow(std::move(pts));
}

}  // namespace sofic
