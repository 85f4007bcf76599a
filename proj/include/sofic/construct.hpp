#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "sofic/actions.hpp"
#include "sofic/approx.hpp"
#include "sofic/groups.hpp"
#include "sofic/perm.hpp"

namespace sofic {

inline constexpr std::size_t kDefaultCarrierCap = 1000000;
inline constexpr std::size_t kDefaultClosureCap = 100000;

struct Construction {
  Construction(SoficMap m, OrbitWitness w, std::size_t closure = 0)
      : map(std::move(m)), witness(std::move(w)), closure_size(closure) {}

  SoficMap map;
  OrbitWitness witness;
  /// Size of the closed subgroup N' (coset construction), otherwise 0.
  std::size_t closure_size = 0;
  /// Per-step parameters the constructor chose, for reports.
  std::vector<std::pair<std::string, std::string>> notes;
};

// ---------------------------------------------------------------------------
// Providers of sofic approximations for a group

class SoficGroupProvider {
 public:
  virtual ~SoficGroupProvider() = default;
  virtual std::string describe() const = 0;
  virtual const GroupPtr& group() const = 0;
  /// Tabulates the provider's map on exactly the listed elements.
  virtual SoficMap map_on(const Window& domain) const = 0;
  /// A map on W and W.W meant to be unital, (W, eps)-multiplicative and
  /// eps-separated on W. The result is not verified here.
  SoficMap provide(const Window& W, const Rational& eps) const;
};

using ProviderPtr = std::shared_ptr<const SoficGroupProvider>;

/// Regular representation of a finite group (left multiplication on the
/// enumerated group). Exact: defect 0, separation 1.
class FiniteRegularProvider final : public SoficGroupProvider {
 public:
  FiniteRegularProvider(GroupPtr group, std::size_t cap = kDefaultCarrierCap);
  std::string describe() const override;
  const GroupPtr& group() const override { return group_; }
  SoficMap map_on(const Window& domain) const override;

  std::size_t order() const { return order_; }
  /// Carrier index of an element.
  std::uint32_t index_of(const GroupElement& g) const;

 private:
  GroupPtr group_;
  std::size_t order_ = 0;
  // General path: enumerated elements keyed by encoding.
  std::vector<GroupElement> elements_;
  std::map<std::string, std::uint32_t> index_;
  // Direct sum of a finite group over a label set: mixed-radix digits.
  bool digits_ = false;
  std::size_t labels_ = 0;
  std::shared_ptr<const FiniteRegularProvider> base_;
};

/// Z^d -> (Z/n)^d followed by the regular representation, on carrier n^d.
/// Exact homomorphism; injective on windows whose differences avoid nZ^d.
class QuotientChainProvider final : public SoficGroupProvider {
 public:
  QuotientChainProvider(GroupPtr group, std::int64_t modulus, std::size_t cap = kDefaultCarrierCap);
  std::string describe() const override;
  const GroupPtr& group() const override { return group_; }
  SoficMap map_on(const Window& domain) const override;

 private:
  GroupPtr group_;
  std::int64_t modulus_;
  std::size_t rank_;
  std::size_t carrier_;
};

/// Serves entries of an existing map.
class FromConstructionProvider final : public SoficGroupProvider {
 public:
  explicit FromConstructionProvider(SoficMap map) : map_(std::move(map)) {}
  std::string describe() const override { return "from_construction"; }
  const GroupPtr& group() const override { return map_.group(); }
  SoficMap map_on(const Window& domain) const override;

 private:
  SoficMap map_;
};

// ---------------------------------------------------------------------------
// Constructors

/// Folner construction: carrier = the Folner set, phi(g) extends a -> ga, and
/// pi_s(x) = alpha(s^{-1})x. The map is tabulated on F and F.F.
Construction amenable_construct(const Action& a, const std::vector<GroupElement>& folner, const Window& F,
                                const PointWindow& E, CompletionPolicy policy = CompletionPolicy::CyclicFill,
                                std::uint64_t seed = 0);

/// Free group construction on Sym(B): B holds E and the points visited by
/// suffixes of the words of F and their inverses; the carrier is Sym(B) in
/// lexicographic order, phi(w) is left multiplication by psi(w) and
/// pi_s(x) = s^{-1}x. Throws CapOverflow when |B|! exceeds carrier_cap.
Construction free_construct(const Action& a, const Window& F, const PointWindow& E,
                            CompletionPolicy policy = CompletionPolicy::CyclicFill, std::uint64_t seed = 0,
                            std::size_t carrier_cap = kDefaultCarrierCap);

/// Locally finite stabilizer construction for G acting on G/N.
Construction coset_construct(const CosetAction& a, const SoficGroupProvider& provider, const Window& F,
                             const PointWindow& E, const Rational& eps, std::size_t closure_cap = kDefaultClosureCap);

/// Product construction over the orbits of `action`, in part order. The
/// carrier index of (a_1, ..., a_n) is row-major: ((a_1 n_2 + a_2) n_3 + a_3)...
/// The map is tabulated on F and F.F.
Construction combine_orbits(const DisjointUnionAction& action, const std::vector<const Construction*>& parts,
                            const Window& F, std::size_t carrier_cap = kDefaultCarrierCap);

/// Per-part budget for combine_orbits: (1 - eps/n)^n >= 1 - eps.
Rational combine_part_eps(const Rational& eps, std::size_t parts);

/// table'(g) = table(hom(g)) on F_new and F_new.F_new; the witness is kept.
Construction restrict_or_quotient(const Construction& c, const Homomorphism& hom, const Window& F_new);

// ---------------------------------------------------------------------------
// Generalized wreath products

/// One stage of the wreath pipeline: an orbit approximation of H acting on X
/// and a provider for G^{(+)B_i}.
struct WreathStage {
  Construction stage;      // phi_i on carrier A_i and (S_i, B_i, pi_i, E_i)
  Window F_i;
  Rational eps_i;          // declared
  ProviderPtr base_provider;
};

/// G^{(+)B_i} for a stage, as a direct sum over the label set.
std::shared_ptr<const DirectSumGroup> stage_base_group(const WreathGroup& w, const WreathStage& stage);
std::shared_ptr<const PermWreathGroup> stage_target_group(const WreathGroup& w, const WreathStage& stage);

enum class SupportPolicy {
  /// Supports must lie inside E_i.
  Strict,
  /// Lamps outside E_i are dropped (the projection p_i).
  Project,
};

/// rho_i(gh): at s in S_i the lamps of g inside E_i pushed along pi_s, identity
/// off S_i; permutation part phi_i(h).
GroupElement wreath_rho(const WreathGroup& w, const GroupElement& e, const WreathStage& stage,
                        SupportPolicy policy = SupportPolicy::Strict);

/// (x, a) -> (phi(f(sigma(a)))x, sigma(a)) on the carrier E_0 x A with index x |A| + a.
Permutation wreath_embed(const SoficMap& base, const PermWreathGroup& target, const GroupElement& u);

struct WreathResult {
  SoficMap map;
  VerificationReport mult;
  VerificationReport separation;
  /// max(stage defect on F_i, 1 - |S_i|/|A_i|).
  Rational stage_eps{0};
};

/// Tabulates wreath_embed(base, rho_i(w)) on F and F.F. Elements of F go
/// through rho_i strictly; the remaining products are projected onto E_i.
WreathResult wreath_sofic_map(const WreathGroup& w, const Window& F, const WreathStage& stage, const Rational& eps,
                              std::size_t carrier_cap = kDefaultCarrierCap);

/// Measured stage budget eps_i = max(stage defect on F_i, 1 - |S_i|/|A_i|).
Rational measured_stage_eps(const WreathStage& stage);

}  // namespace sofic
