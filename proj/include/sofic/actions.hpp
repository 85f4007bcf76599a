#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "sofic/groups.hpp"
#include "sofic/point.hpp"

namespace sofic {

enum class ActionKind {
  LeftTranslation,
  IntegerTranslation,
  Coset,
  NaturalFinite,
  Restriction,
  Quotient,
  DisjointUnion,
};

/// An action alpha: G -> Sym(X) of a group on a countable set with a point codec.
class Action : public PointSpace {
 public:
  explicit Action(GroupPtr group) : group_(std::move(group)) {}

  virtual ActionKind kind() const = 0;
  /// alpha(g)x.
  virtual Point apply(const GroupElement& g, const Point& x) const = 0;
  /// Left multiplication of the acting group on itself (point = element encoding).
  virtual bool is_left_translation() const { return false; }

  const GroupPtr& group() const { return group_; }

 private:
  GroupPtr group_;
};

using ActionPtr = std::shared_ptr<const Action>;

/// Group homomorphism between two represented groups.
struct Homomorphism {
  GroupPtr source;
  GroupPtr target;
  std::function<GroupElement(const GroupElement&)> map;
  std::string name;

  GroupElement operator()(const GroupElement& g) const { return map(g); }
};

Homomorphism identity_hom(GroupPtr group);
/// Z^1 or Z/m onto Z/n (n must divide m in the cyclic case).
Homomorphism reduce_mod(GroupPtr source, std::int64_t modulus);
/// Z^d -> Z^d, x -> k x: the inclusion of the subgroup kZ^d, identified with Z^d.
Homomorphism scale_hom(GroupPtr source, std::int64_t factor);
/// G wr H -> H.
Homomorphism wreath_top(GroupPtr wreath);

class LeftTranslation final : public Action {
 public:
  explicit LeftTranslation(GroupPtr group) : Action(std::move(group)) {}
  ActionKind kind() const override { return ActionKind::LeftTranslation; }
  Point apply(const GroupElement& g, const Point& x) const override;
  bool is_left_translation() const override { return true; }
  std::string describe() const override;
  std::string format_point(const Point& p) const override;
  std::optional<std::vector<Point>> finite_points() const override;
};

/// Z^d acting on itself by translation; same codec as LeftTranslation(Z^d).
class IntegerTranslation final : public Action {
 public:
  explicit IntegerTranslation(std::size_t rank);
  ActionKind kind() const override { return ActionKind::IntegerTranslation; }
  Point apply(const GroupElement& g, const Point& x) const override;
  bool is_left_translation() const override { return true; }
  std::string describe() const override;
  std::string format_point(const Point& p) const override;
  std::size_t rank() const { return rank_; }
  Point point(std::vector<std::int64_t> coords) const;

 private:
  std::size_t rank_;
};

/// G acting on G/N by left multiplication. A coset is encoded by its canonical
/// representative, which is also the section sigma: G/N -> G.
class CosetAction final : public Action {
 public:
  using Membership = std::function<bool(const GroupElement&)>;
  using Canonical = std::function<GroupElement(const GroupElement&)>;

  CosetAction(GroupPtr group, Membership in_subgroup, Canonical canonical, std::string subgroup_name,
              std::vector<GroupElement> subgroup_generators = {});

  /// N finite, given by generators; the representative of gN is its member
  /// with the least canonical encoding.
  static std::shared_ptr<CosetAction> finite_subgroup(GroupPtr group, std::vector<GroupElement> generators,
                                                      std::size_t cap = 100000);
  /// N = G^{(+)X} inside G wr H; gN is represented by its H-component.
  static std::shared_ptr<CosetAction> wreath_base(GroupPtr wreath);
  /// N trivial; G/N = G.
  static std::shared_ptr<CosetAction> trivial(GroupPtr group);

  ActionKind kind() const override { return ActionKind::Coset; }
  Point apply(const GroupElement& g, const Point& x) const override;
  bool is_left_translation() const override { return subgroup_name_ == "trivial"; }
  std::string describe() const override;
  std::string format_point(const Point& p) const override;
  std::optional<std::vector<Point>> finite_points() const override;

  bool in_subgroup(const GroupElement& g) const { return in_subgroup_(g); }
  /// Code of gN; equal iff the elements differ by right multiplication by N.
  Point coset_canonical(const GroupElement& g) const;
  /// sigma(x): the stored representative of the coset x.
  GroupElement section(const Point& x) const;
  const std::vector<GroupElement>& subgroup_generators() const { return subgroup_generators_; }

 private:
  Membership in_subgroup_;
  Canonical canonical_;
  std::string subgroup_name_;
  std::vector<GroupElement> subgroup_generators_;
};

/// A finite permutation group on its carrier {0..n-1}.
class NaturalFiniteAction final : public Action {
 public:
  explicit NaturalFiniteAction(GroupPtr group);
  ActionKind kind() const override { return ActionKind::NaturalFinite; }
  Point apply(const GroupElement& g, const Point& x) const override;
  std::string describe() const override;
  std::string format_point(const Point& p) const override;
  std::optional<std::vector<Point>> finite_points() const override;
};

/// alpha restricted to a subgroup H, given by an inclusion H -> G.
class RestrictionAction final : public Action {
 public:
  RestrictionAction(ActionPtr inner, Homomorphism inclusion);
  ActionKind kind() const override { return ActionKind::Restriction; }
  Point apply(const GroupElement& g, const Point& x) const override;
  std::string describe() const override;
  std::string format_point(const Point& p) const override { return inner_->format_point(p); }
  std::optional<std::vector<Point>> finite_points() const override { return inner_->finite_points(); }
  const ActionPtr& inner() const { return inner_; }
  const Homomorphism& hom() const { return hom_; }

 private:
  ActionPtr inner_;
  Homomorphism hom_;
};

/// G acting through a quotient q: G -> H and an action of H.
class QuotientAction final : public Action {
 public:
  QuotientAction(ActionPtr inner, Homomorphism quotient);
  ActionKind kind() const override { return ActionKind::Quotient; }
  Point apply(const GroupElement& g, const Point& x) const override;
  std::string describe() const override;
  std::string format_point(const Point& p) const override { return inner_->format_point(p); }
  std::optional<std::vector<Point>> finite_points() const override { return inner_->finite_points(); }
  const ActionPtr& inner() const { return inner_; }
  const Homomorphism& hom() const { return hom_; }

 private:
  ActionPtr inner_;
  Homomorphism hom_;
};

/// X_1 |_| ... |_| X_n for actions of one group. A point is the part index
/// (varint) followed by the part's own point bytes.
class DisjointUnionAction final : public Action {
 public:
  explicit DisjointUnionAction(std::vector<ActionPtr> parts);
  ActionKind kind() const override { return ActionKind::DisjointUnion; }
  Point apply(const GroupElement& g, const Point& x) const override;
  std::string describe() const override;
  std::string format_point(const Point& p) const override;
  std::optional<std::vector<Point>> finite_points() const override;

  const std::vector<ActionPtr>& parts() const { return parts_; }
  Point embed(std::size_t part, const Point& inner) const;
  std::pair<std::size_t, Point> split(const Point& p) const;

 private:
  std::vector<ActionPtr> parts_;
};

/// Finite ordered set of distinct points (the windows E).
class PointWindow {
 public:
  PointWindow() = default;
  explicit PointWindow(std::vector<Point> points);

  const std::vector<Point>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  bool contains(const Point& p) const { return index_.count(p) != 0; }
  /// Position of p, or size() when absent.
  std::size_t index_of(const Point& p) const;

  friend bool operator==(const PointWindow& a, const PointWindow& b) { return a.points_ == b.points_; }

 private:
  std::vector<Point> points_;
  std::map<Point, std::size_t> index_;
};

/// The box {0..n-1}^d in Z^d, in lexicographic order.
std::vector<GroupElement> folner_box(std::size_t rank, std::size_t side);

/// Rank-1 convenience: the window {lo..hi} of Z.
PointWindow int_window(std::int64_t lo, std::int64_t hi);

}  // namespace sofic
