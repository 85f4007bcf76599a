#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sofic/actions.hpp"
#include "sofic/groups.hpp"
#include "sofic/perm.hpp"
#include "sofic/rational.hpp"

namespace sofic {

/// phi: G -> Sym(A) on a finite domain window. Entries keep insertion order.
class SoficMap {
 public:
  /// Throws CarrierMismatch when an entry has the wrong carrier size and
  /// IncompleteWindow when the identity is missing from the domain.
  SoficMap(GroupPtr group, std::size_t carrier_size, std::vector<GroupElement> domain, std::vector<Permutation> perms);

  const GroupPtr& group() const { return domain_.group(); }
  std::size_t carrier_size() const { return carrier_size_; }
  const Window& domain_window() const { return domain_; }
  const std::vector<Permutation>& permutations() const { return perms_; }

  bool defined_at(const GroupElement& g) const { return domain_.contains(g); }
  /// Throws IncompleteWindow naming g when g lies outside the domain window.
  const Permutation& at(const GroupElement& g) const;
  /// table(identity) is the identity permutation.
  bool unital() const;

 private:
  std::size_t carrier_size_;
  Window domain_;
  std::vector<Permutation> perms_;
  std::map<std::string, std::size_t> index_;
};

/// S, |B| and the injections pi_s: E -> B, stored as label rows aligned with
/// E's order. pi[k] belongs to S[k].
struct OrbitWitness {
  std::vector<std::uint32_t> S;
  std::uint32_t labels_size = 0;
  PointWindow E;
  std::vector<std::vector<std::uint32_t>> pi;

  /// Row of s, or nullptr when s is not in S.
  const std::vector<std::uint32_t>* row(std::uint32_t s) const;
  /// Throws MalformedWitness unless S is strictly ascending inside the carrier,
  /// every s has a row of length |E| and every label is below labels_size.
  void validate(std::size_t carrier_size) const;

  friend bool operator==(const OrbitWitness&, const OrbitWitness&) = default;
};

struct VerificationReport {
  bool unital = false;
  Rational mult_defect_max{0};
  std::int64_t mult_pairs_checked = 0;
  Rational witness_fraction{0};
  std::int64_t equivariance_violations = 0;
  Rational separation_min{1};
  bool pass_mult = false;
  bool pass_witness = false;
  bool pass_separation = false;
};

/// Human-readable lines naming failing pairs, triples or elements. Checks
/// append at most `limit` entries.
struct Diagnostics {
  std::vector<std::string> lines;
  std::size_t limit = 16;
  void add(std::string line) {
    if (lines.size() < limit) lines.push_back(std::move(line));
  }
};

/// max over g, h in F of d(phi(gh), phi(g)phi(h)); passes iff every pair is < eps.
VerificationReport check_multiplicative(const SoficMap& m, const Window& F, const Rational& eps,
                                        Diagnostics* diag = nullptr);

/// |S| > (1 - eps)|A|, every pi_s injective and
/// pi_{phi(g)s}(x) = pi_s(alpha(g^{-1})x) whenever phi(g)s in S and alpha(g^{-1})x in E.
VerificationReport check_orbit_witness(const SoficMap& m, const OrbitWitness& w, const Action& a, const Window& F,
                                       const PointWindow& E, const Rational& eps, Diagnostics* diag = nullptr);

/// min over nonidentity g in F of d(1, phi(g)); passes iff > 1 - eps.
VerificationReport check_separation(const SoficMap& m, const Window& F, const Rational& eps,
                                    Diagnostics* diag = nullptr);

struct GoodSets {
  std::vector<std::uint32_t> S1;
  std::vector<std::uint32_t> S2;
  std::vector<std::uint32_t> S;
};

/// S1: phi(g)s pairwise distinct over F. S2: phi(gh)s = phi(g)phi(h)s over F x F.
GoodSets good_sets(const SoficMap& m, const Window& F);

/// For a left-translation witness: with T_g = S cap phi(g)^{-1}S, reports as
/// separation_min the least fraction of T_g moved by phi(g) over nonidentity
/// g in F (1 for empty T_g). Passes iff every such g moves all of T_g. This is
/// finitary evidence, not a certificate.
VerificationReport group_separation_from_action(const SoficMap& m, const OrbitWitness& w, const Action& a,
                                                const Window& F, const Rational& eps, Diagnostics* diag = nullptr);

/// Conjugates every entry by r and moves the witness along: phi'(g) = r phi(g) r^{-1},
/// S' = r(S), pi'_{r(s)} = pi_s.
std::pair<SoficMap, OrbitWitness> relabel(const SoficMap& m, const OrbitWitness& w, const Permutation& r);
SoficMap relabel(const SoficMap& m, const Permutation& r);

/// Throws IncompleteWindow naming the first element of `needed` outside the map's domain.
void require_domain(const SoficMap& m, const Window& needed, const char* what);

}  // namespace sofic
