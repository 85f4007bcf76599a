#include "sofic/approx.hpp"

#include <algorithm>

#include "sofic/error.hpp"
#include "sofic/simd/kernels.hpp"

namespace sofic {

SoficMap::SoficMap(GroupPtr group, std::size_t carrier_size, std::vector<GroupElement> domain,
                   std::vector<Permutation> perms)
    : carrier_size_(carrier_size), domain_(std::move(group), std::move(domain)), perms_(std::move(perms)) {
  if (carrier_size_ == 0) fail(ErrorCode::Contract, "carrier must be nonempty");
  if (perms_.size() != domain_.size()) fail(ErrorCode::Contract, "domain and table lengths differ");
  for (std::size_t i = 0; i < perms_.size(); ++i) {
    if (perms_[i].size() != carrier_size_) {
      fail(ErrorCode::CarrierMismatch, "entry for " + domain_.group()->format(domain_.elements()[i]) + " has carrier " +
                                           std::to_string(perms_[i].size()) + ", map carrier is " +
                                           std::to_string(carrier_size_));
    }
    index_.emplace(encode(domain_.elements()[i]), i);
  }
  if (!domain_.contains_identity()) fail(ErrorCode::IncompleteWindow, "identity is missing from the domain window");
}

const Permutation& SoficMap::at(const GroupElement& g) const {
  const auto it = index_.find(encode(g));
  if (it == index_.end()) fail(ErrorCode::IncompleteWindow, "no table entry for " + group()->format(g));
  return perms_[it->second];
}

bool SoficMap::unital() const { return at(group()->identity()).is_identity(); }

const std::vector<std::uint32_t>* OrbitWitness::row(std::uint32_t s) const {
  const auto it = std::lower_bound(S.begin(), S.end(), s);
  if (it == S.end() || *it != s) return nullptr;
  return &pi[static_cast<std::size_t>(it - S.begin())];
}

void OrbitWitness::validate(std::size_t carrier_size) const {
  if (pi.size() != S.size()) fail(ErrorCode::MalformedWitness, "pi is not defined for every s in S");
  for (std::size_t k = 0; k < S.size(); ++k) {
    if (S[k] >= carrier_size) fail(ErrorCode::MalformedWitness, "s = " + std::to_string(S[k]) + " outside the carrier");
    if (k > 0 && S[k - 1] >= S[k]) fail(ErrorCode::MalformedWitness, "S is not strictly ascending");
    if (pi[k].size() != E.size()) {
      fail(ErrorCode::MalformedWitness, "pi_" + std::to_string(S[k]) + " is not defined on all of E");
    }
    for (std::uint32_t label : pi[k]) {
      if (label >= labels_size) {
        fail(ErrorCode::MalformedWitness, "pi_" + std::to_string(S[k]) + " uses label " + std::to_string(label) +
                                              " outside B of size " + std::to_string(labels_size));
      }
    }
  }
}

void require_domain(const SoficMap& m, const Window& needed, const char* what) {
  if (!needed.group()->same_as(*m.group())) {
    fail(ErrorCode::FamilyMismatch, std::string(what) + " lives in " + needed.group()->describe() + ", map is on " +
                                        m.group()->describe());
  }
  for (const auto& g : needed.elements()) {
    if (!m.defined_at(g)) {
      fail(ErrorCode::IncompleteWindow, std::string(what) + " element " + m.group()->format(g) + " has no table entry");
    }
  }
}

namespace {

void require_products(const SoficMap& m, const Window& F) {
  require_domain(m, F, "F");
  for (const auto& g : F.elements()) {
    for (const auto& h : F.elements()) {
      const GroupElement gh = m.group()->mul(g, h);
      if (!m.defined_at(gh)) {
        fail(ErrorCode::IncompleteWindow, "product " + m.group()->format(g) + " * " + m.group()->format(h) + " = " +
                                              m.group()->format(gh) + " has no table entry");
      }
    }
  }
}

Rational fraction(std::size_t num, std::size_t den) {
  return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

}  // namespace

VerificationReport check_multiplicative(const SoficMap& m, const Window& F, const Rational& eps, Diagnostics* diag) {
  require_products(m, F);
  const auto& k = simd::active_kernels();
  const std::size_t n = m.carrier_size();
  std::vector<std::uint32_t> buf(n);
  VerificationReport r;
  r.unital = m.unital();
  std::size_t worst = 0;
  for (const auto& g : F.elements()) {
    const Permutation& pg = m.at(g);
    for (const auto& h : F.elements()) {
      const Permutation& ph = m.at(h);
      const Permutation& pgh = m.at(m.group()->mul(g, h));
      k.compose(pg.images().data(), ph.images().data(), buf.data(), n);
      const std::size_t bad = k.count_mismatch(pgh.images().data(), buf.data(), n);
      worst = std::max(worst, bad);
      ++r.mult_pairs_checked;
      if (diag != nullptr && fraction(bad, n) >= eps) {
        diag->add("pair (" + m.group()->format(g) + ", " + m.group()->format(h) + "): defect " +
                  to_string(fraction(bad, n)));
      }
    }
  }
  r.mult_defect_max = fraction(worst, n);
  r.pass_mult = r.mult_defect_max < eps;
  return r;
}

VerificationReport check_orbit_witness(const SoficMap& m, const OrbitWitness& w, const Action& a, const Window& F,
                                       const PointWindow& E, const Rational& eps, Diagnostics* diag) {
  require_domain(m, F, "F");
  if (!a.group()->same_as(*m.group())) {
    fail(ErrorCode::FamilyMismatch, "action is by " + a.group()->describe() + ", map is on " + m.group()->describe());
  }
  if (!(w.E == E)) fail(ErrorCode::MalformedWitness, "witness was built for a different window E");
  w.validate(m.carrier_size());

  const std::size_t n = m.carrier_size();
  VerificationReport r;
  r.unital = m.unital();
  r.witness_fraction = fraction(w.S.size(), n);
  bool ok = r.witness_fraction > Rational(1) - eps;
  if (!ok && diag != nullptr) diag->add("|S| = " + std::to_string(w.S.size()) + " is too small");

  for (std::size_t k = 0; k < w.S.size(); ++k) {
    std::vector<std::uint32_t> labels = w.pi[k];
    std::sort(labels.begin(), labels.end());
    if (std::adjacent_find(labels.begin(), labels.end()) != labels.end()) {
      ok = false;
      if (diag != nullptr) diag->add("pi_" + std::to_string(w.S[k]) + " is not injective");
    }
  }

  std::vector<std::int64_t> slot(n, -1);
  for (std::size_t k = 0; k < w.S.size(); ++k) slot[w.S[k]] = static_cast<std::int64_t>(k);

  for (const auto& g : F.elements()) {
    const Permutation& pg = m.at(g);
    const GroupElement g_inv = m.group()->inv(g);
    // pre[j] = index in E of alpha(g^{-1}) E[j], or |E| when it leaves E.
    std::vector<std::size_t> pre(E.size());
    for (std::size_t j = 0; j < E.size(); ++j) pre[j] = E.index_of(a.apply(g_inv, E.points()[j]));
    for (std::size_t k = 0; k < w.S.size(); ++k) {
      const std::uint32_t s = w.S[k];
      const std::int64_t t = slot[pg(s)];
      if (t < 0) continue;
      for (std::size_t j = 0; j < E.size(); ++j) {
        if (pre[j] == E.size()) continue;
        if (w.pi[static_cast<std::size_t>(t)][j] != w.pi[k][pre[j]]) {
          ++r.equivariance_violations;
          if (diag != nullptr) {
            diag->add("triple (g=" + m.group()->format(g) + ", s=" + std::to_string(s) + ", x=" +
                      a.format_point(E.points()[j]) + ")");
          }
        }
      }
    }
  }
  r.pass_witness = ok && r.equivariance_violations == 0;
  return r;
}

VerificationReport check_separation(const SoficMap& m, const Window& F, const Rational& eps, Diagnostics* diag) {
  require_domain(m, F, "F");
  VerificationReport r;
  r.unital = m.unital();
  for (const auto& g : F.elements()) {
    if (m.group()->is_identity(g)) continue;
    const Rational d = displacement(m.at(g));
    if (d < r.separation_min) r.separation_min = d;
    if (diag != nullptr && !(d > Rational(1) - eps)) {
      diag->add("element " + m.group()->format(g) + ": d(1, phi(g)) = " + to_string(d));
    }
  }
  r.pass_separation = r.separation_min > Rational(1) - eps;
  return r;
}

GoodSets good_sets(const SoficMap& m, const Window& F) {
  require_products(m, F);
  const auto& k = simd::active_kernels();
  const std::size_t n = m.carrier_size();
  std::vector<std::uint8_t> collide(n, 0);
  std::vector<std::uint8_t> defect(n, 0);
  std::vector<std::uint32_t> buf(n);
  const auto& els = F.elements();
  for (std::size_t i = 0; i < els.size(); ++i) {
    const Permutation& pg = m.at(els[i]);
    for (std::size_t j = 0; j < els.size(); ++j) {
      const Permutation& ph = m.at(els[j]);
      if (j > i) k.mark(pg.images().data(), ph.images().data(), collide.data(), n, true);
      k.compose(pg.images().data(), ph.images().data(), buf.data(), n);
      k.mark(m.at(m.group()->mul(els[i], els[j])).images().data(), buf.data(), defect.data(), n, false);
    }
  }
  GoodSets out;
  for (std::uint32_t s = 0; s < n; ++s) {
    if (!collide[s]) out.S1.push_back(s);
    if (!defect[s]) out.S2.push_back(s);
    if (!collide[s] && !defect[s]) out.S.push_back(s);
  }
  return out;
}

VerificationReport group_separation_from_action(const SoficMap& m, const OrbitWitness& w, const Action& a,
                                                const Window& F, const Rational& eps, Diagnostics* diag) {
  if (!a.is_left_translation()) fail(ErrorCode::Contract, "separation evidence needs a left-translation action");
  if (!F.symmetric()) fail(ErrorCode::Contract, "separation evidence needs a symmetric F");
  if (!w.E.contains(element_point(m.group()->identity()))) {
    fail(ErrorCode::Contract, "separation evidence needs the identity in the witness window E");
  }
  VerificationReport r = check_orbit_witness(m, w, a, F, w.E, eps);
  std::vector<bool> in_s(m.carrier_size(), false);
  for (std::uint32_t s : w.S) in_s[s] = true;
  r.separation_min = Rational(1);
  for (const auto& g : F.elements()) {
    if (m.group()->is_identity(g)) continue;
    const Permutation& pg = m.at(g);
    std::size_t total = 0;
    std::size_t moved = 0;
    for (std::uint32_t s : w.S) {
      if (!in_s[pg(s)]) continue;
      ++total;
      if (pg(s) != s) ++moved;
    }
    if (total == 0) continue;
    const Rational f = fraction(moved, total);
    if (f < r.separation_min) r.separation_min = f;
    if (diag != nullptr && moved != total) {
      diag->add("element " + m.group()->format(g) + " fixes " + std::to_string(total - moved) + " of " +
                std::to_string(total) + " points of S");
    }
  }
  r.pass_separation = r.separation_min == Rational(1);
  return r;
}

SoficMap relabel(const SoficMap& m, const Permutation& r) {
  if (r.size() != m.carrier_size()) fail(ErrorCode::CarrierMismatch, "relabeling has the wrong carrier");
  const Permutation r_inv = inverse(r);
  std::vector<Permutation> perms;
  for (const auto& p : m.permutations()) perms.push_back(compose(r, compose(p, r_inv)));
  return SoficMap(m.group(), m.carrier_size(), m.domain_window().elements(), std::move(perms));
}

std::pair<SoficMap, OrbitWitness> relabel(const SoficMap& m, const OrbitWitness& w, const Permutation& r) {
  SoficMap out = relabel(m, r);
  std::vector<std::pair<std::uint32_t, std::vector<std::uint32_t>>> rows;
  for (std::size_t k = 0; k < w.S.size(); ++k) rows.emplace_back(r(w.S[k]), w.pi[k]);
  std::sort(rows.begin(), rows.end());
  OrbitWitness ow;
  ow.labels_size = w.labels_size;
  ow.E = w.E;
  for (auto& [s, row] : rows) {
    ow.S.push_back(s);
    ow.pi.push_back(std::move(row));
  }
  return {std::move(out), std::move(ow)};
}

}  // namespace sofic
