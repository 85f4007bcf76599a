#include <algorithm>
#include <numeric>
#include <set>

#include "sofic/construct.hpp"
#include "sofic/error.hpp"

namespace sofic {

namespace {

struct UnionFind {
  std::vector<std::uint32_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0U); }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::uint32_t x, std::uint32_t y) {
    x = find(x);
    y = find(y);
    if (x != y) parent[std::max(x, y)] = std::min(x, y);
  }
};

}  // namespace

Construction coset_construct(const CosetAction& a, const SoficGroupProvider& provider, const Window& F,
                             const PointWindow& E, const Rational& eps, std::size_t closure_cap) {
  const GroupPtr& G = a.group();
  if (!provider.group()->same_as(*G)) {
    fail(ErrorCode::FamilyMismatch, "provider is for " + provider.group()->describe() + ", action is by " + G->describe());
  }
  if (!F.group()->same_as(*G)) fail(ErrorCode::FamilyMismatch, "F lives in " + F.group()->describe());
  if (!F.contains_identity() || !F.symmetric()) fail(ErrorCode::Contract, "F must be symmetric and contain the identity");

  std::vector<GroupElement> sigma;
  for (const auto& x : E.points()) sigma.push_back(a.section(x));

  // U = {sigma(x)^{-1} g sigma(g^{-1}x)}.
  std::vector<GroupElement> U;
  std::set<std::string> seen;
  for (const auto& g : F.elements()) {
    const GroupElement g_inv = G->inv(g);
    for (std::size_t j = 0; j < E.size(); ++j) {
      const GroupElement back = a.section(a.apply(g_inv, E.points()[j]));
      GroupElement u = G->mul(G->inv(sigma[j]), G->mul(g, back));
      if (!a.in_subgroup(u)) {
        fail(ErrorCode::Membership, "sigma(x)^-1 g sigma(g^-1 x) = " + G->format(u) + " for g = " + G->format(g) +
                                        ", x = " + a.format_point(E.points()[j]) + " is not in the subgroup");
      }
      if (seen.insert(encode(u)).second) U.push_back(std::move(u));
    }
  }
  const std::vector<GroupElement> N = subgroup_closure(*G, U, closure_cap);

  // F' = F u N' u N' sigma(E)^{-1}.
  std::vector<GroupElement> fp = F.elements();
  std::set<std::string> fp_keys;
  for (const auto& g : fp) fp_keys.insert(encode(g));
  auto add = [&](GroupElement g) {
    if (fp_keys.insert(encode(g)).second) fp.push_back(std::move(g));
  };
  for (const auto& n : N) add(n);
  for (const auto& n : N) {
    for (const auto& s : sigma) add(G->mul(n, G->inv(s)));
  }
  const Window Fp(G, std::move(fp));
  const Rational eps_prime = eps / Rational(static_cast<std::int64_t>(E.size()) + 1);
  const auto fp_size = static_cast<std::int64_t>(Fp.size());
  const Rational eps_base = eps_prime / Rational(4 * fp_size * fp_size);

  SoficMap base = provider.provide(Fp, eps_base);
  const GoodSets good = good_sets(base, Fp);
  const std::size_t n = base.carrier_size();
  if (!(Rational(static_cast<std::int64_t>(good.S.size()), static_cast<std::int64_t>(n)) > Rational(1) - eps_prime)) {
    fail(ErrorCode::Contract, provider.describe() + " leaves only " + std::to_string(good.S.size()) + " of " +
                                  std::to_string(n) + " good points; it cannot meet eps' = " + to_string(eps_prime));
  }

  std::vector<bool> in_good(n, false);
  for (std::uint32_t s : good.S) in_good[s] = true;
  UnionFind classes(n);
  for (std::uint32_t s : good.S) {
    for (const auto& g : N) {
      const std::uint32_t t = base.at(g)(s);
      if (in_good[t]) classes.unite(s, t);
    }
  }

  std::vector<const Permutation*> back;
  for (const auto& s : sigma) back.push_back(&base.at(G->inv(s)));

  OrbitWitness w;
  w.E = E;
  std::vector<std::uint32_t> used;
  for (std::uint32_t s : good.S) {
    bool keep = true;
    for (const auto* p : back) keep = keep && in_good[(*p)(s)];
    if (!keep) continue;
    w.S.push_back(s);
    std::vector<std::uint32_t> row;
    for (const auto* p : back) {
      row.push_back(classes.find((*p)(s)));
      used.push_back(row.back());
    }
    w.pi.push_back(std::move(row));
  }
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  for (auto& row : w.pi) {
    for (auto& label : row) label = static_cast<std::uint32_t>(std::lower_bound(used.begin(), used.end(), label) - used.begin());
  }
  w.labels_size = static_cast<std::uint32_t>(used.size());

  Construction out{std::move(base), std::move(w), N.size()};
  out.notes.emplace_back("U", std::to_string(U.size()));
  out.notes.emplace_back("N'", std::to_string(N.size()));
  out.notes.emplace_back("F'", std::to_string(Fp.size()));
  out.notes.emplace_back("eps'", to_string(eps_prime));
  out.notes.emplace_back("eps''", to_string(eps_base));
  out.notes.emplace_back("good", std::to_string(good.S.size()));
  return out;
}

}  // namespace sofic
