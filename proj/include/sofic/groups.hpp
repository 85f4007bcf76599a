#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "sofic/perm.hpp"
#include "sofic/point.hpp"

namespace sofic {

class GroupElement;
class Action;

/// Value-semantic heap box, for the recursive H-component of wreath elements.
template <class T>
class Boxed {
 public:
  Boxed() : ptr_(std::make_unique<T>()) {}
  Boxed(T value) : ptr_(std::make_unique<T>(std::move(value))) {}  // NOLINT(google-explicit-constructor)
  Boxed(const Boxed& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
  Boxed(Boxed&&) noexcept = default;
  Boxed& operator=(const Boxed& other) {
    if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
    return *this;
  }
  Boxed& operator=(Boxed&&) noexcept = default;

  const T& operator*() const { return *ptr_; }
  const T* operator->() const { return ptr_.get(); }

  friend bool operator==(const Boxed& a, const Boxed& b) { return *a.ptr_ == *b.ptr_; }

 private:
  std::unique_ptr<T> ptr_;
};

enum class FamilyTag : std::uint8_t {
  FinitePerm = 1,
  FreeAbelian = 2,
  Free = 3,
  FiniteCyclic = 4,
  DirectSum = 5,
  PermWreath = 6,
  GeneralizedWreath = 7,
};

struct IntVector {
  std::vector<std::int64_t> coords;
  friend bool operator==(const IntVector&, const IntVector&) = default;
};

/// Reduced word; letter +(i+1) is generator i, -(i+1) its inverse.
struct FreeWord {
  std::vector<std::int32_t> letters;
  friend bool operator==(const FreeWord&, const FreeWord&) = default;
};

struct Residue {
  std::int64_t value = 0;
  friend bool operator==(const Residue&, const Residue&) = default;
};

/// Finitely supported function into a group: points sorted ascending,
/// identity values never stored.
struct FiniteSupport {
  std::vector<Point> points;
  std::vector<GroupElement> values;
  bool operator==(const FiniteSupport&) const;
  bool empty() const { return points.empty(); }
};

/// Element f.sigma of G^{(+)A} x| Sym(A); f is total on the carrier {0..|A|-1}.
struct SemidirectElement {
  std::vector<GroupElement> f;
  Permutation sigma = Permutation::identity(1);
  bool operator==(const SemidirectElement&) const;
};

/// Element g.h of a generalized wreath product G wr_alpha H.
struct WreathElement {
  FiniteSupport support;
  Boxed<GroupElement> h;
  bool operator==(const WreathElement&) const;
};

class GroupElement {
 public:
  using Payload =
      std::variant<Permutation, IntVector, FreeWord, Residue, FiniteSupport, SemidirectElement, WreathElement>;

  GroupElement() : payload_(Residue{}) {}
  GroupElement(Payload payload) : payload_(std::move(payload)) {}  // NOLINT(google-explicit-constructor)

  const Payload& payload() const { return payload_; }
  FamilyTag tag() const;

  template <class T>
  const T* get_if() const {
    return std::get_if<T>(&payload_);
  }

  friend bool operator==(const GroupElement& a, const GroupElement& b) { return a.payload_ == b.payload_; }

 private:
  Payload payload_;
};

/// Canonical encoding: one family-tag byte followed by the payload. Equal
/// elements have byte-identical encodings, so encodings serve as map keys.
std::string encode(const GroupElement& e);
GroupElement decode(std::string_view bytes);
GroupElement decode_from(class ByteReader& reader);

Point element_point(const GroupElement& e);
GroupElement point_element(const Point& p);
/// Point of Z (rank-1 free abelian codec).
Point int_point(std::int64_t v);
std::int64_t point_int(const Point& p);

class Group;
using GroupPtr = std::shared_ptr<const Group>;

class Group : public std::enable_shared_from_this<Group> {
 public:
  virtual ~Group() = default;

  virtual FamilyTag family() const = 0;
  virtual GroupElement identity() const = 0;
  virtual GroupElement mul(const GroupElement& a, const GroupElement& b) const = 0;
  virtual GroupElement inv(const GroupElement& a) const = 0;
  /// Finite order, when known to be finite.
  virtual std::optional<std::uint64_t> order() const { return std::nullopt; }
  /// A generating set (finite families) or the standard generators.
  virtual std::vector<GroupElement> generators() const = 0;
  virtual std::string format(const GroupElement& e) const = 0;
  /// Stable structural description; two groups are the same iff equal.
  virtual std::string describe() const = 0;
  /// Payload has this family's shape and parameters.
  virtual bool accepts(const GroupElement& e) const = 0;

  bool is_identity(const GroupElement& e) const { return e == identity(); }
  bool same_as(const Group& other) const { return describe() == other.describe(); }
  /// Throws FamilyMismatch naming `what` when `e` is not an element of this group.
  void require(const GroupElement& e, const char* what = "element") const;
};

class FinitePermGroup final : public Group {
 public:
  FinitePermGroup(std::size_t degree, std::vector<Permutation> generators);

  FamilyTag family() const override { return FamilyTag::FinitePerm; }
  GroupElement identity() const override;
  GroupElement mul(const GroupElement& a, const GroupElement& b) const override;
  GroupElement inv(const GroupElement& a) const override;
  std::optional<std::uint64_t> order() const override;
  std::vector<GroupElement> generators() const override;
  std::string format(const GroupElement& e) const override;
  std::string describe() const override;
  bool accepts(const GroupElement& e) const override;

  std::size_t degree() const { return degree_; }
  const std::vector<Permutation>& generator_perms() const { return generators_; }
  /// All elements, enumerated once by closure (cap 10^6). Membership
  /// (accepts) is decided against this list.
  const std::vector<GroupElement>& elements() const;

 private:
  const Permutation& shaped(const GroupElement& e) const;

  std::size_t degree_;
  std::vector<Permutation> generators_;
  mutable std::once_flag enumerated_;
  mutable std::vector<GroupElement> elements_;
  mutable std::set<std::string> members_;
};

class FreeAbelianGroup final : public Group {
 public:
  explicit FreeAbelianGroup(std::size_t rank);

  FamilyTag family() const override { return FamilyTag::FreeAbelian; }
  GroupElement identity() const override;
  GroupElement mul(const GroupElement& a, const GroupElement& b) const override;
  GroupElement inv(const GroupElement& a) const override;
  std::vector<GroupElement> generators() const override;
  std::string format(const GroupElement& e) const override;
  std::string describe() const override;
  bool accepts(const GroupElement& e) const override;

  std::size_t rank() const { return rank_; }
  GroupElement element(std::vector<std::int64_t> coords) const;

 private:
  std::size_t rank_;
};

class FreeGroup final : public Group {
 public:
  explicit FreeGroup(std::size_t rank);

  FamilyTag family() const override { return FamilyTag::Free; }
  GroupElement identity() const override;
  GroupElement mul(const GroupElement& a, const GroupElement& b) const override;
  GroupElement inv(const GroupElement& a) const override;
  std::vector<GroupElement> generators() const override;
  /// Letters a, b, c, ...; upper case for inverses.
  std::string format(const GroupElement& e) const override;
  std::string describe() const override;
  bool accepts(const GroupElement& e) const override;

  std::size_t rank() const { return rank_; }
  /// Freely reduces the given letters.
  GroupElement word(const std::vector<std::int32_t>& letters) const;
  /// Parses "aB" style words.
  GroupElement parse_word(const std::string& text) const;

 private:
  std::size_t rank_;
};

class FiniteCyclicGroup final : public Group {
 public:
  explicit FiniteCyclicGroup(std::int64_t modulus);

  FamilyTag family() const override { return FamilyTag::FiniteCyclic; }
  GroupElement identity() const override;
  GroupElement mul(const GroupElement& a, const GroupElement& b) const override;
  GroupElement inv(const GroupElement& a) const override;
  std::optional<std::uint64_t> order() const override;
  std::vector<GroupElement> generators() const override;
  std::string format(const GroupElement& e) const override;
  std::string describe() const override;
  bool accepts(const GroupElement& e) const override;

  std::int64_t modulus() const { return modulus_; }
  GroupElement element(std::int64_t v) const;

 private:
  std::int64_t modulus_;
};

/// G^{(+)X}: finitely supported functions from a point set into G.
class DirectSumGroup final : public Group {
 public:
  DirectSumGroup(GroupPtr base, std::shared_ptr<const PointSpace> index);

  FamilyTag family() const override { return FamilyTag::DirectSum; }
  GroupElement identity() const override;
  GroupElement mul(const GroupElement& a, const GroupElement& b) const override;
  GroupElement inv(const GroupElement& a) const override;
  std::optional<std::uint64_t> order() const override;
  std::vector<GroupElement> generators() const override;
  std::string format(const GroupElement& e) const override;
  std::string describe() const override;
  bool accepts(const GroupElement& e) const override;

  const GroupPtr& base() const { return base_; }
  const std::shared_ptr<const PointSpace>& index() const { return index_; }
  /// Builds the canonical element from (point, value) pairs; identities dropped.
  GroupElement element(std::vector<std::pair<Point, GroupElement>> entries) const;
  /// Value at a point (identity when outside the support).
  GroupElement at(const GroupElement& e, const Point& p) const;

 private:
  GroupPtr base_;
  std::shared_ptr<const PointSpace> index_;
};

/// G^{(+)A} x| Sym(A) for a finite carrier A, carrying the metric d_{G,A}.
class PermWreathGroup final : public Group {
 public:
  PermWreathGroup(GroupPtr base, std::size_t carrier);

  FamilyTag family() const override { return FamilyTag::PermWreath; }
  GroupElement identity() const override;
  GroupElement mul(const GroupElement& a, const GroupElement& b) const override;
  GroupElement inv(const GroupElement& a) const override;
  std::optional<std::uint64_t> order() const override;
  std::vector<GroupElement> generators() const override;
  std::string format(const GroupElement& e) const override;
  std::string describe() const override;
  bool accepts(const GroupElement& e) const override;

  const GroupPtr& base() const { return base_; }
  std::size_t carrier() const { return carrier_; }

 private:
  GroupPtr base_;
  std::size_t carrier_;
};

/// G wr_alpha H = G^{(+)X} x|_beta H with beta(h)(f)(x) = f(alpha(h)^{-1} x).
class WreathGroup final : public Group {
 public:
  WreathGroup(GroupPtr base, GroupPtr acting, std::shared_ptr<const Action> action);

  FamilyTag family() const override { return FamilyTag::GeneralizedWreath; }
  GroupElement identity() const override;
  GroupElement mul(const GroupElement& a, const GroupElement& b) const override;
  GroupElement inv(const GroupElement& a) const override;
  std::optional<std::uint64_t> order() const override;
  /// Base generators at every point (finite X only) followed by H's generators.
  std::vector<GroupElement> generators() const override;
  std::string format(const GroupElement& e) const override;
  std::string describe() const override;
  bool accepts(const GroupElement& e) const override;

  const GroupPtr& base() const { return base_; }
  const GroupPtr& acting() const { return acting_; }
  const std::shared_ptr<const Action>& action() const { return action_; }

  GroupElement element(std::vector<std::pair<Point, GroupElement>> lamps, GroupElement h) const;
  /// beta(h)(f): moves the value at x to alpha(h)x.
  FiniteSupport shift(const GroupElement& h, const FiniteSupport& f) const;

 private:
  GroupPtr base_;
  GroupPtr acting_;
  std::shared_ptr<const Action> action_;
};

/// Semidirect product u.v = (f_u . (f_v o sigma_u^{-1}), sigma_u sigma_v).
GroupElement semidirect_mul(const PermWreathGroup& group, const GroupElement& u, const GroupElement& v);

/// d_{G,A}(u, v) = |{a : sigma_u(a) != sigma_v(a) or f_u(sigma_u(a)) != f_v(sigma_v(a))}| / |A|.
Rational metric_dga(const PermWreathGroup& group, const GroupElement& u, const GroupElement& v);

/// (f_u . beta(h_u)(f_v), h_u h_v).
GroupElement wreath_mul(const WreathGroup& group, const GroupElement& u, const GroupElement& v);

/// Finite ordered set of distinct group elements (the windows F of the
/// approximation conditions). Flags are computed, never trusted.
class Window {
 public:
  Window(GroupPtr group, std::vector<GroupElement> elements);

  const GroupPtr& group() const { return group_; }
  const std::vector<GroupElement>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  bool symmetric() const { return symmetric_; }
  bool contains_identity() const { return contains_identity_; }
  bool contains(const GroupElement& e) const { return keys_.count(encode(e)) != 0; }

  /// {gh : g in this, h in other}, in row-major discovery order.
  Window product(const Window& other) const;
  /// This window followed by the new elements of `other`.
  Window united(const Window& other) const;
  /// Closes under inverses and adds the identity.
  Window symmetrized() const;

 private:
  GroupPtr group_;
  std::vector<GroupElement> elements_;
  std::set<std::string> keys_;
  bool symmetric_ = false;
  bool contains_identity_ = false;
};

/// All products of at most `radius` generators and inverses, breadth first.
Window ball(const GroupPtr& group, const std::vector<GroupElement>& generators, std::size_t radius);

/// Subgroup generated by `generators`, by right-multiplication closure.
/// Throws CapOverflow once more than `cap` elements are found.
std::vector<GroupElement> subgroup_closure(const Group& group, const std::vector<GroupElement>& generators,
                                           std::size_t cap);

/// Every element of a finite group, via closure of its generators.
std::vector<GroupElement> enumerate_group(const Group& group, std::size_t cap);

}  // namespace sofic
