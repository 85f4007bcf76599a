#include "sofic/groups.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <limits>
#include <sstream>

#include "sofic/actions.hpp"
#include "sofic/bytes.hpp"
#include "sofic/error.hpp"

namespace sofic {

bool FiniteSupport::operator==(const FiniteSupport& other) const {
  return points == other.points && values == other.values;
}

bool SemidirectElement::operator==(const SemidirectElement& other) const {
  return f == other.f && sigma == other.sigma;
}

bool WreathElement::operator==(const WreathElement& other) const {
  return support == other.support && h == other.h;
}

FamilyTag GroupElement::tag() const {
  return std::visit(
      [](const auto& p) -> FamilyTag {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Permutation>) return FamilyTag::FinitePerm;
        else if constexpr (std::is_same_v<T, IntVector>) return FamilyTag::FreeAbelian;
        else if constexpr (std::is_same_v<T, FreeWord>) return FamilyTag::Free;
        else if constexpr (std::is_same_v<T, Residue>) return FamilyTag::FiniteCyclic;
        else if constexpr (std::is_same_v<T, FiniteSupport>) return FamilyTag::DirectSum;
        else if constexpr (std::is_same_v<T, SemidirectElement>) return FamilyTag::PermWreath;
        else return FamilyTag::GeneralizedWreath;
      },
      payload_);
}

// ---------------------------------------------------------------------------
// Canonical encoding

namespace {

void encode_into(const GroupElement& e, ByteWriter& w);

void encode_perm(const Permutation& p, ByteWriter& w) {
  w.put_varint(p.size());
  for (std::uint32_t v : p.images()) w.put_varint(v);
}

void encode_support(const FiniteSupport& s, ByteWriter& w) {
  w.put_varint(s.points.size());
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    w.put_blob(s.points[i].bytes);
    encode_into(s.values[i], w);
  }
}

void encode_into(const GroupElement& e, ByteWriter& w) {
  w.put_byte(static_cast<std::uint8_t>(e.tag()));
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Permutation>) {
          encode_perm(p, w);
        } else if constexpr (std::is_same_v<T, IntVector>) {
          w.put_varint(p.coords.size());
          for (std::int64_t c : p.coords) w.put_signed(c);
        } else if constexpr (std::is_same_v<T, FreeWord>) {
          w.put_varint(p.letters.size());
          for (std::int32_t c : p.letters) w.put_signed(c);
        } else if constexpr (std::is_same_v<T, Residue>) {
          w.put_signed(p.value);
        } else if constexpr (std::is_same_v<T, FiniteSupport>) {
          encode_support(p, w);
        } else if constexpr (std::is_same_v<T, SemidirectElement>) {
          w.put_varint(p.f.size());
          for (const auto& v : p.f) encode_into(v, w);
          encode_perm(p.sigma, w);
        } else {
          encode_support(p.support, w);
          encode_into(*p.h, w);
        }
      },
      e.payload());
}

Permutation decode_perm(ByteReader& r) {
  const std::uint64_t n = r.get_varint();
  std::vector<std::uint32_t> images;
  images.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) images.push_back(static_cast<std::uint32_t>(r.get_varint()));
  try {
    return Permutation(std::move(images));
  } catch (const Error& err) {
    fail(ErrorCode::Decode, err.what());
  }
}

FiniteSupport decode_support(ByteReader& r) {
  FiniteSupport s;
  const std::uint64_t n = r.get_varint();
  for (std::uint64_t i = 0; i < n; ++i) {
    s.points.push_back(Point{r.get_blob()});
    s.values.push_back(decode_from(r));
  }
  if (!std::is_sorted(s.points.begin(), s.points.end()) ||
      std::adjacent_find(s.points.begin(), s.points.end()) != s.points.end()) {
    fail(ErrorCode::Decode, "support points not strictly ascending");
  }
  return s;
}

}  // namespace

GroupElement decode_from(ByteReader& r) {
  const auto tag = static_cast<FamilyTag>(r.get_byte());
  switch (tag) {
    case FamilyTag::FinitePerm:
      return GroupElement(decode_perm(r));
    case FamilyTag::FreeAbelian: {
      IntVector v;
      const std::uint64_t n = r.get_varint();
      for (std::uint64_t i = 0; i < n; ++i) v.coords.push_back(r.get_signed());
      return GroupElement(std::move(v));
    }
    case FamilyTag::Free: {
      FreeWord w;
      const std::uint64_t n = r.get_varint();
      for (std::uint64_t i = 0; i < n; ++i) w.letters.push_back(static_cast<std::int32_t>(r.get_signed()));
      for (std::size_t i = 0; i + 1 < w.letters.size(); ++i) {
        if (w.letters[i] == -w.letters[i + 1]) fail(ErrorCode::Decode, "free word is not reduced");
      }
      return GroupElement(std::move(w));
    }
    case FamilyTag::FiniteCyclic:
      return GroupElement(Residue{r.get_signed()});
    case FamilyTag::DirectSum:
      return GroupElement(decode_support(r));
    case FamilyTag::PermWreath: {
      SemidirectElement s;
      const std::uint64_t n = r.get_varint();
      for (std::uint64_t i = 0; i < n; ++i) s.f.push_back(decode_from(r));
      s.sigma = decode_perm(r);
      if (s.sigma.size() != s.f.size()) fail(ErrorCode::Decode, "semidirect element carrier mismatch");
      return GroupElement(std::move(s));
    }
    case FamilyTag::GeneralizedWreath: {
      WreathElement w;
      w.support = decode_support(r);
      w.h = decode_from(r);
      return GroupElement(std::move(w));
    }
  }
  fail(ErrorCode::Decode, "unknown family tag " + std::to_string(static_cast<int>(tag)));
}

std::string encode(const GroupElement& e) {
  ByteWriter w;
  encode_into(e, w);
  return std::move(w).str();
}

GroupElement decode(std::string_view bytes) {
  ByteReader r(bytes);
  GroupElement e = decode_from(r);
  if (!r.at_end()) fail(ErrorCode::Decode, "trailing bytes after element encoding");
  return e;
}

Point element_point(const GroupElement& e) { return Point{encode(e)}; }
GroupElement point_element(const Point& p) { return decode(p.bytes); }

Point int_point(std::int64_t v) { return element_point(GroupElement(IntVector{{v}})); }

std::int64_t point_int(const Point& p) {
  const GroupElement e = point_element(p);
  const auto* v = e.get_if<IntVector>();
  if (v == nullptr || v->coords.size() != 1) fail(ErrorCode::Decode, "point is not an integer");
  return v->coords[0];
}

Point label_point(std::uint32_t label) {
  ByteWriter w;
  w.put_varint(label);
  return Point{std::move(w).str()};
}

std::uint32_t point_label(const Point& p) {
  ByteReader r(p.bytes);
  const auto v = static_cast<std::uint32_t>(r.get_varint());
  if (!r.at_end()) fail(ErrorCode::Decode, "label point has trailing bytes");
  return v;
}

std::string LabelSpace::describe() const { return "labels(" + std::to_string(size_) + ")"; }

std::string LabelSpace::format_point(const Point& p) const { return "#" + std::to_string(point_label(p)); }

std::optional<std::vector<Point>> LabelSpace::finite_points() const {
  std::vector<Point> out;
  for (std::uint32_t i = 0; i < size_; ++i) out.push_back(label_point(i));
  return out;
}

void Group::require(const GroupElement& e, const char* what) const {
  if (!accepts(e)) fail(ErrorCode::FamilyMismatch, std::string(what) + " is not an element of " + describe());
}

namespace {

template <class T>
const T& payload_as(const Group& g, const GroupElement& e) {
  const T* p = e.get_if<T>();
  if (p == nullptr || !g.accepts(e)) fail(ErrorCode::FamilyMismatch, "element is not in " + g.describe());
  return *p;
}

std::string join_ints(const std::vector<std::int64_t>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

std::optional<std::uint64_t> checked_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t out = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (base != 0 && out > std::numeric_limits<std::uint64_t>::max() / base) return std::nullopt;
    out *= base;
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// FinitePermGroup

FinitePermGroup::FinitePermGroup(std::size_t degree, std::vector<Permutation> generators)
    : degree_(degree), generators_(std::move(generators)) {
  if (degree_ == 0) fail(ErrorCode::Contract, "permutation group degree must be positive");
  for (const auto& g : generators_) {
    if (g.size() != degree_) fail(ErrorCode::CarrierMismatch, "generator degree differs from group degree");
  }
}

GroupElement FinitePermGroup::identity() const { return GroupElement(Permutation::identity(degree_)); }

const Permutation& FinitePermGroup::shaped(const GroupElement& e) const {
  const auto* p = e.get_if<Permutation>();
  if (p == nullptr || p->size() != degree_) fail(ErrorCode::FamilyMismatch, "element is not in " + describe());
  return *p;
}

GroupElement FinitePermGroup::mul(const GroupElement& a, const GroupElement& b) const {
  return GroupElement(compose(shaped(a), shaped(b)));
}

GroupElement FinitePermGroup::inv(const GroupElement& a) const { return GroupElement(inverse(shaped(a))); }

const std::vector<GroupElement>& FinitePermGroup::elements() const {
  std::call_once(enumerated_, [&] {
    elements_ = subgroup_closure(*this, generators(), 1000000);
    for (const auto& e : elements_) members_.insert(encode(e));
  });
  return elements_;
}

std::optional<std::uint64_t> FinitePermGroup::order() const { return elements().size(); }

std::vector<GroupElement> FinitePermGroup::generators() const {
  std::vector<GroupElement> out;
  for (const auto& g : generators_) out.emplace_back(g);
  return out;
}

std::string FinitePermGroup::format(const GroupElement& e) const {
  const auto& p = shaped(e);
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? "," : "") << p(i);
  os << ']';
  return os.str();
}

std::string FinitePermGroup::describe() const {
  std::ostringstream os;
  os << "perm_group(" << degree_;
  for (const auto& g : generators_) {
    os << ";";
    for (std::size_t i = 0; i < g.size(); ++i) os << (i ? "," : "") << g(i);
  }
  os << ")";
  return os.str();
}

bool FinitePermGroup::accepts(const GroupElement& e) const {
  const auto* p = e.get_if<Permutation>();
  if (p == nullptr || p->size() != degree_) return false;
  elements();
  return members_.count(encode(e)) != 0;
}

// ---------------------------------------------------------------------------
// FreeAbelianGroup

FreeAbelianGroup::FreeAbelianGroup(std::size_t rank) : rank_(rank) {
  if (rank_ == 0) fail(ErrorCode::Contract, "free abelian rank must be positive");
}

GroupElement FreeAbelianGroup::identity() const { return GroupElement(IntVector{std::vector<std::int64_t>(rank_, 0)}); }

GroupElement FreeAbelianGroup::element(std::vector<std::int64_t> coords) const {
  if (coords.size() != rank_) fail(ErrorCode::FamilyMismatch, "coordinate count differs from rank");
  return GroupElement(IntVector{std::move(coords)});
}

GroupElement FreeAbelianGroup::mul(const GroupElement& a, const GroupElement& b) const {
  const auto& x = payload_as<IntVector>(*this, a);
  const auto& y = payload_as<IntVector>(*this, b);
  IntVector out{x.coords};
  for (std::size_t i = 0; i < rank_; ++i) out.coords[i] += y.coords[i];
  return GroupElement(std::move(out));
}

GroupElement FreeAbelianGroup::inv(const GroupElement& a) const {
  IntVector out = payload_as<IntVector>(*this, a);
  for (auto& c : out.coords) c = -c;
  return GroupElement(std::move(out));
}

std::vector<GroupElement> FreeAbelianGroup::generators() const {
  std::vector<GroupElement> out;
  for (std::size_t i = 0; i < rank_; ++i) {
    std::vector<std::int64_t> c(rank_, 0);
    c[i] = 1;
    out.emplace_back(IntVector{std::move(c)});
  }
  return out;
}

std::string FreeAbelianGroup::format(const GroupElement& e) const {
  const auto& v = payload_as<IntVector>(*this, e);
  if (rank_ == 1) return std::to_string(v.coords[0]);
  return "(" + join_ints(v.coords) + ")";
}

std::string FreeAbelianGroup::describe() const { return "Z^" + std::to_string(rank_); }

bool FreeAbelianGroup::accepts(const GroupElement& e) const {
  const auto* v = e.get_if<IntVector>();
  return v != nullptr && v->coords.size() == rank_;
}

// ---------------------------------------------------------------------------
// FreeGroup

FreeGroup::FreeGroup(std::size_t rank) : rank_(rank) {
  if (rank_ == 0) fail(ErrorCode::Contract, "free group rank must be positive");
}

GroupElement FreeGroup::identity() const { return GroupElement(FreeWord{}); }

GroupElement FreeGroup::word(const std::vector<std::int32_t>& letters) const {
  FreeWord out;
  for (std::int32_t l : letters) {
    if (l == 0 || static_cast<std::size_t>(std::abs(l)) > rank_) {
      fail(ErrorCode::FamilyMismatch, "letter " + std::to_string(l) + " outside free group of rank " + std::to_string(rank_));
    }
    if (!out.letters.empty() && out.letters.back() == -l) {
      out.letters.pop_back();
    } else {
      out.letters.push_back(l);
    }
  }
  return GroupElement(std::move(out));
}

GroupElement FreeGroup::parse_word(const std::string& text) const {
  std::vector<std::int32_t> letters;
  for (char c : text) {
    if (c == 'e' && text.size() == 1) break;
    if (c >= 'a' && c <= 'z') {
      letters.push_back(c - 'a' + 1);
    } else if (c >= 'A' && c <= 'Z') {
      letters.push_back(-(c - 'A' + 1));
    } else {
      fail(ErrorCode::Parse, "bad letter in free word '" + text + "'");
    }
  }
  return word(letters);
}

GroupElement FreeGroup::mul(const GroupElement& a, const GroupElement& b) const {
  const auto& x = payload_as<FreeWord>(*this, a);
  const auto& y = payload_as<FreeWord>(*this, b);
  FreeWord out{x.letters};
  for (std::int32_t l : y.letters) {
    if (!out.letters.empty() && out.letters.back() == -l) {
      out.letters.pop_back();
    } else {
      out.letters.push_back(l);
    }
  }
  return GroupElement(std::move(out));
}

GroupElement FreeGroup::inv(const GroupElement& a) const {
  const auto& x = payload_as<FreeWord>(*this, a);
  FreeWord out;
  for (auto it = x.letters.rbegin(); it != x.letters.rend(); ++it) out.letters.push_back(-*it);
  return GroupElement(std::move(out));
}

std::vector<GroupElement> FreeGroup::generators() const {
  std::vector<GroupElement> out;
  for (std::size_t i = 0; i < rank_; ++i) out.emplace_back(FreeWord{{static_cast<std::int32_t>(i + 1)}});
  return out;
}

std::string FreeGroup::format(const GroupElement& e) const {
  const auto& w = payload_as<FreeWord>(*this, e);
  if (w.letters.empty()) return "e";
  std::string out;
  for (std::int32_t l : w.letters) {
    const int idx = std::abs(l) - 1;
    if (rank_ <= 26) {
      out.push_back(static_cast<char>((l > 0 ? 'a' : 'A') + idx));
    } else {
      out += "g" + std::to_string(idx + 1) + (l > 0 ? "" : "^-1");
    }
  }
  return out;
}

std::string FreeGroup::describe() const { return "F_" + std::to_string(rank_); }

bool FreeGroup::accepts(const GroupElement& e) const {
  const auto* w = e.get_if<FreeWord>();
  if (w == nullptr) return false;
  for (std::size_t i = 0; i < w->letters.size(); ++i) {
    const std::int32_t l = w->letters[i];
    if (l == 0 || static_cast<std::size_t>(std::abs(l)) > rank_) return false;
    if (i + 1 < w->letters.size() && w->letters[i + 1] == -l) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// FiniteCyclicGroup

FiniteCyclicGroup::FiniteCyclicGroup(std::int64_t modulus) : modulus_(modulus) {
  if (modulus_ < 1) fail(ErrorCode::Contract, "cyclic modulus must be positive");
}

GroupElement FiniteCyclicGroup::identity() const { return GroupElement(Residue{0}); }

GroupElement FiniteCyclicGroup::element(std::int64_t v) const {
  return GroupElement(Residue{((v % modulus_) + modulus_) % modulus_});
}

GroupElement FiniteCyclicGroup::mul(const GroupElement& a, const GroupElement& b) const {
  return element(payload_as<Residue>(*this, a).value + payload_as<Residue>(*this, b).value);
}

GroupElement FiniteCyclicGroup::inv(const GroupElement& a) const { return element(-payload_as<Residue>(*this, a).value); }

std::optional<std::uint64_t> FiniteCyclicGroup::order() const { return static_cast<std::uint64_t>(modulus_); }

std::vector<GroupElement> FiniteCyclicGroup::generators() const { return {element(1)}; }

std::string FiniteCyclicGroup::format(const GroupElement& e) const {
  return std::to_string(payload_as<Residue>(*this, e).value);
}

std::string FiniteCyclicGroup::describe() const { return "Z/" + std::to_string(modulus_); }

bool FiniteCyclicGroup::accepts(const GroupElement& e) const {
  const auto* r = e.get_if<Residue>();
  return r != nullptr && r->value >= 0 && r->value < modulus_;
}

// ---------------------------------------------------------------------------
// Finite-support helpers shared by direct sums and wreath products

namespace {

FiniteSupport canonical_support(const Group& base, std::vector<std::pair<Point, GroupElement>> entries) {
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  FiniteSupport out;
  for (auto& [p, v] : entries) {
    base.require(v, "support value");
    if (!out.points.empty() && out.points.back() == p) {
      fail(ErrorCode::Contract, "point listed twice in finite support");
    }
    if (base.is_identity(v)) continue;
    out.points.push_back(std::move(p));
    out.values.push_back(std::move(v));
  }
  return out;
}

/// Pointwise a(x) * b(x) on sorted supports.
FiniteSupport pointwise_mul(const Group& base, const FiniteSupport& a, const FiniteSupport& b) {
  FiniteSupport out;
  std::size_t i = 0;
  std::size_t j = 0;
  auto push = [&](const Point& p, GroupElement v) {
    if (base.is_identity(v)) return;
    out.points.push_back(p);
    out.values.push_back(std::move(v));
  };
  while (i < a.points.size() || j < b.points.size()) {
    if (j == b.points.size() || (i < a.points.size() && a.points[i] < b.points[j])) {
      push(a.points[i], a.values[i]);
      ++i;
    } else if (i == a.points.size() || b.points[j] < a.points[i]) {
      push(b.points[j], b.values[j]);
      ++j;
    } else {
      push(a.points[i], base.mul(a.values[i], b.values[j]));
      ++i;
      ++j;
    }
  }
  return out;
}

FiniteSupport pointwise_inv(const Group& base, const FiniteSupport& a) {
  FiniteSupport out = a;
  for (auto& v : out.values) v = base.inv(v);
  return out;
}

bool support_ok(const Group& base, const FiniteSupport& s) {
  if (s.points.size() != s.values.size()) return false;
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    if (i > 0 && !(s.points[i - 1] < s.points[i])) return false;
    if (!base.accepts(s.values[i]) || base.is_identity(s.values[i])) return false;
  }
  return true;
}

std::string format_support(const Group& base, const PointSpace& index, const FiniteSupport& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    if (i) out += ",";
    out += index.format_point(s.points[i]) + ":" + base.format(s.values[i]);
  }
  return out + "}";
}

}  // namespace

// ---------------------------------------------------------------------------
// DirectSumGroup

DirectSumGroup::DirectSumGroup(GroupPtr base, std::shared_ptr<const PointSpace> index)
    : base_(std::move(base)), index_(std::move(index)) {}

GroupElement DirectSumGroup::identity() const { return GroupElement(FiniteSupport{}); }

GroupElement DirectSumGroup::element(std::vector<std::pair<Point, GroupElement>> entries) const {
  return GroupElement(canonical_support(*base_, std::move(entries)));
}

GroupElement DirectSumGroup::at(const GroupElement& e, const Point& p) const {
  const auto& s = payload_as<FiniteSupport>(*this, e);
  const auto it = std::lower_bound(s.points.begin(), s.points.end(), p);
  if (it != s.points.end() && *it == p) return s.values[static_cast<std::size_t>(it - s.points.begin())];
  return base_->identity();
}

GroupElement DirectSumGroup::mul(const GroupElement& a, const GroupElement& b) const {
  return GroupElement(pointwise_mul(*base_, payload_as<FiniteSupport>(*this, a), payload_as<FiniteSupport>(*this, b)));
}

GroupElement DirectSumGroup::inv(const GroupElement& a) const {
  return GroupElement(pointwise_inv(*base_, payload_as<FiniteSupport>(*this, a)));
}

std::optional<std::uint64_t> DirectSumGroup::order() const {
  const auto pts = index_->finite_points();
  const auto base_order = base_->order();
  if (!pts || !base_order) return std::nullopt;
  return checked_pow(*base_order, pts->size());
}

std::vector<GroupElement> DirectSumGroup::generators() const {
  std::vector<GroupElement> out;
  const auto pts = index_->finite_points();
  if (!pts) return out;
  for (const auto& p : *pts) {
    for (const auto& g : base_->generators()) out.push_back(element({{p, g}}));
  }
  return out;
}

std::string DirectSumGroup::format(const GroupElement& e) const {
  return format_support(*base_, *index_, payload_as<FiniteSupport>(*this, e));
}

std::string DirectSumGroup::describe() const { return "sum(" + base_->describe() + "," + index_->describe() + ")"; }

bool DirectSumGroup::accepts(const GroupElement& e) const {
  const auto* s = e.get_if<FiniteSupport>();
  return s != nullptr && support_ok(*base_, *s);
}

// ---------------------------------------------------------------------------
// PermWreathGroup

PermWreathGroup::PermWreathGroup(GroupPtr base, std::size_t carrier) : base_(std::move(base)), carrier_(carrier) {
  if (carrier_ == 0) fail(ErrorCode::Contract, "carrier must be nonempty");
}

GroupElement PermWreathGroup::identity() const {
  return GroupElement(SemidirectElement{std::vector<GroupElement>(carrier_, base_->identity()),
                                        Permutation::identity(carrier_)});
}

GroupElement PermWreathGroup::mul(const GroupElement& a, const GroupElement& b) const {
  return semidirect_mul(*this, a, b);
}

GroupElement PermWreathGroup::inv(const GroupElement& a) const {
  const auto& u = payload_as<SemidirectElement>(*this, a);
  // (f sigma)^{-1} = beta(sigma^{-1})(f^{-1}) sigma^{-1}, whose value at a is f(sigma(a))^{-1}.
  SemidirectElement out{std::vector<GroupElement>(carrier_), inverse(u.sigma)};
  for (std::size_t i = 0; i < carrier_; ++i) out.f[i] = base_->inv(u.f[u.sigma(i)]);
  return GroupElement(std::move(out));
}

std::optional<std::uint64_t> PermWreathGroup::order() const {
  const auto base_order = base_->order();
  if (!base_order) return std::nullopt;
  auto out = checked_pow(*base_order, carrier_);
  for (std::uint64_t k = 2; out && k <= carrier_; ++k) {
    if (*out > std::numeric_limits<std::uint64_t>::max() / k) return std::nullopt;
    *out *= k;
  }
  return out;
}

std::vector<GroupElement> PermWreathGroup::generators() const {
  std::vector<GroupElement> out;
  for (const auto& g : base_->generators()) {
    SemidirectElement e{std::vector<GroupElement>(carrier_, base_->identity()), Permutation::identity(carrier_)};
    e.f[0] = g;
    out.emplace_back(std::move(e));
  }
  if (carrier_ > 1) {
    out.emplace_back(SemidirectElement{std::vector<GroupElement>(carrier_, base_->identity()),
                                       Permutation::transposition(carrier_, 0, 1)});
    out.emplace_back(SemidirectElement{std::vector<GroupElement>(carrier_, base_->identity()),
                                       Permutation::cyclic_shift(carrier_, 1)});
  }
  return out;
}

std::string PermWreathGroup::format(const GroupElement& e) const {
  const auto& u = payload_as<SemidirectElement>(*this, e);
  std::string out = "(";
  for (std::size_t i = 0; i < carrier_; ++i) out += (i ? "," : "") + base_->format(u.f[i]);
  out += ";";
  for (std::size_t i = 0; i < carrier_; ++i) out += (i ? "," : "") + std::to_string(u.sigma(i));
  return out + ")";
}

std::string PermWreathGroup::describe() const {
  return "semidirect(" + base_->describe() + "," + std::to_string(carrier_) + ")";
}

bool PermWreathGroup::accepts(const GroupElement& e) const {
  const auto* u = e.get_if<SemidirectElement>();
  if (u == nullptr || u->f.size() != carrier_ || u->sigma.size() != carrier_) return false;
  return std::all_of(u->f.begin(), u->f.end(), [&](const GroupElement& v) { return base_->accepts(v); });
}

GroupElement semidirect_mul(const PermWreathGroup& group, const GroupElement& a, const GroupElement& b) {
  const auto& u = payload_as<SemidirectElement>(group, a);
  const auto& v = payload_as<SemidirectElement>(group, b);
  const Permutation u_inv = inverse(u.sigma);
  SemidirectElement out{std::vector<GroupElement>(group.carrier()), compose(u.sigma, v.sigma)};
  for (std::size_t i = 0; i < group.carrier(); ++i) out.f[i] = group.base()->mul(u.f[i], v.f[u_inv(i)]);
  return GroupElement(std::move(out));
}

Rational metric_dga(const PermWreathGroup& group, const GroupElement& a, const GroupElement& b) {
  const auto& u = payload_as<SemidirectElement>(group, a);
  const auto& v = payload_as<SemidirectElement>(group, b);
  std::int64_t count = 0;
  for (std::size_t i = 0; i < group.carrier(); ++i) {
    if (u.sigma(i) != v.sigma(i) || !(u.f[u.sigma(i)] == v.f[v.sigma(i)])) ++count;
  }
  return Rational(count, static_cast<std::int64_t>(group.carrier()));
}

// ---------------------------------------------------------------------------
// WreathGroup

WreathGroup::WreathGroup(GroupPtr base, GroupPtr acting, std::shared_ptr<const Action> action)
    : base_(std::move(base)), acting_(std::move(acting)), action_(std::move(action)) {
  if (!action_->group()->same_as(*acting_)) {
    fail(ErrorCode::FamilyMismatch, "wreath action is by " + action_->group()->describe() + ", not " + acting_->describe());
  }
}

GroupElement WreathGroup::identity() const { return GroupElement(WreathElement{FiniteSupport{}, acting_->identity()}); }

GroupElement WreathGroup::element(std::vector<std::pair<Point, GroupElement>> lamps, GroupElement h) const {
  acting_->require(h, "wreath H-component");
  return GroupElement(WreathElement{canonical_support(*base_, std::move(lamps)), std::move(h)});
}

FiniteSupport WreathGroup::shift(const GroupElement& h, const FiniteSupport& f) const {
  std::vector<std::pair<Point, GroupElement>> moved;
  moved.reserve(f.points.size());
  for (std::size_t i = 0; i < f.points.size(); ++i) moved.emplace_back(action_->apply(h, f.points[i]), f.values[i]);
  return canonical_support(*base_, std::move(moved));
}

GroupElement WreathGroup::mul(const GroupElement& a, const GroupElement& b) const { return wreath_mul(*this, a, b); }

GroupElement WreathGroup::inv(const GroupElement& a) const {
  const auto& u = payload_as<WreathElement>(*this, a);
  const GroupElement h_inv = acting_->inv(*u.h);
  return GroupElement(WreathElement{shift(h_inv, pointwise_inv(*base_, u.support)), h_inv});
}

std::optional<std::uint64_t> WreathGroup::order() const {
  const auto pts = action_->finite_points();
  const auto base_order = base_->order();
  const auto h_order = acting_->order();
  if (!pts || !base_order || !h_order) return std::nullopt;
  auto out = checked_pow(*base_order, pts->size());
  if (!out || *out > std::numeric_limits<std::uint64_t>::max() / *h_order) return std::nullopt;
  return *out * *h_order;
}

std::vector<GroupElement> WreathGroup::generators() const {
  std::vector<GroupElement> out;
  if (const auto pts = action_->finite_points()) {
    for (const auto& p : *pts) {
      for (const auto& g : base_->generators()) out.push_back(element({{p, g}}, acting_->identity()));
    }
  }
  for (const auto& h : acting_->generators()) out.push_back(element({}, h));
  return out;
}

std::string WreathGroup::format(const GroupElement& e) const {
  const auto& u = payload_as<WreathElement>(*this, e);
  return "<" + format_support(*base_, *action_, u.support) + ";" + acting_->format(*u.h) + ">";
}

std::string WreathGroup::describe() const {
  return "wreath(" + base_->describe() + "," + acting_->describe() + "," + action_->describe() + ")";
}

bool WreathGroup::accepts(const GroupElement& e) const {
  const auto* u = e.get_if<WreathElement>();
  return u != nullptr && support_ok(*base_, u->support) && acting_->accepts(*u->h);
}

GroupElement wreath_mul(const WreathGroup& group, const GroupElement& a, const GroupElement& b) {
  const auto& u = payload_as<WreathElement>(group, a);
  const auto& v = payload_as<WreathElement>(group, b);
  return GroupElement(WreathElement{pointwise_mul(*group.base(), u.support, group.shift(*u.h, v.support)),
                                    group.acting()->mul(*u.h, *v.h)});
}

// ---------------------------------------------------------------------------
// Windows and closures

Window::Window(GroupPtr group, std::vector<GroupElement> elements) : group_(std::move(group)), elements_(std::move(elements)) {
  for (const auto& e : elements_) {
    group_->require(e, "window element");
    if (!keys_.insert(encode(e)).second) fail(ErrorCode::Contract, "window lists " + group_->format(e) + " twice");
  }
  contains_identity_ = contains(group_->identity());
  symmetric_ = std::all_of(elements_.begin(), elements_.end(), [&](const GroupElement& e) { return contains(group_->inv(e)); });
}

Window Window::product(const Window& other) const {
  std::vector<GroupElement> out;
  std::set<std::string> seen;
  for (const auto& g : elements_) {
    for (const auto& h : other.elements_) {
      GroupElement gh = group_->mul(g, h);
      if (seen.insert(encode(gh)).second) out.push_back(std::move(gh));
    }
  }
  return Window(group_, std::move(out));
}

Window Window::united(const Window& other) const {
  std::vector<GroupElement> out = elements_;
  for (const auto& e : other.elements_) {
    if (!contains(e)) out.push_back(e);
  }
  return Window(group_, std::move(out));
}

Window Window::symmetrized() const {
  std::vector<GroupElement> out;
  std::set<std::string> seen;
  auto add = [&](GroupElement e) {
    if (seen.insert(encode(e)).second) out.push_back(std::move(e));
  };
  add(group_->identity());
  for (const auto& e : elements_) add(e);
  for (const auto& e : elements_) add(group_->inv(e));
  return Window(group_, std::move(out));
}

Window ball(const GroupPtr& group, const std::vector<GroupElement>& generators, std::size_t radius) {
  std::vector<GroupElement> steps;
  std::set<std::string> step_keys;
  for (const auto& g : generators) {
    for (GroupElement s : {g, group->inv(g)}) {
      if (step_keys.insert(encode(s)).second) steps.push_back(std::move(s));
    }
  }
  std::vector<GroupElement> out{group->identity()};
  std::set<std::string> seen{encode(out.front())};
  std::vector<GroupElement> frontier = out;
  for (std::size_t r = 0; r < radius; ++r) {
    std::vector<GroupElement> next;
    for (const auto& e : frontier) {
      for (const auto& s : steps) {
        GroupElement es = group->mul(e, s);
        if (seen.insert(encode(es)).second) {
          out.push_back(es);
          next.push_back(std::move(es));
        }
      }
    }
    frontier = std::move(next);
  }
  return Window(group, std::move(out));
}

std::vector<GroupElement> subgroup_closure(const Group& group, const std::vector<GroupElement>& generators, std::size_t cap) {
  std::vector<GroupElement> out{group.identity()};
  std::set<std::string> seen{encode(out.front())};
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    const std::size_t i = queue.front();
    queue.pop_front();
    for (const auto& g : generators) {
      GroupElement e = group.mul(out[i], g);
      if (seen.insert(encode(e)).second) {
        if (out.size() >= cap) {
          fail(ErrorCode::CapOverflow, "subgroup closure in " + group.describe() + " exceeds " + std::to_string(cap) + " elements");
        }
        out.push_back(std::move(e));
        queue.push_back(out.size() - 1);
      }
    }
  }
  return out;
}

std::vector<GroupElement> enumerate_group(const Group& group, std::size_t cap) {
  const auto order = group.order();
  if (!order) fail(ErrorCode::Contract, group.describe() + " is not a finite group");
  if (*order > cap) {
    fail(ErrorCode::CapOverflow, group.describe() + " has order " + std::to_string(*order) + ", above cap " + std::to_string(cap));
  }
  return subgroup_closure(group, group.generators(), cap);
}

}  // namespace sofic
