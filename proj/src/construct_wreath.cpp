#include <algorithm>
#include <set>

#include "sofic/construct.hpp"
#include "sofic/error.hpp"

namespace sofic {

std::shared_ptr<const DirectSumGroup> stage_base_group(const WreathGroup& w, const WreathStage& stage) {
  return std::make_shared<DirectSumGroup>(w.base(), std::make_shared<LabelSpace>(stage.stage.witness.labels_size));
}

std::shared_ptr<const PermWreathGroup> stage_target_group(const WreathGroup& w, const WreathStage& stage) {
  return std::make_shared<PermWreathGroup>(stage_base_group(w, stage), stage.stage.map.carrier_size());
}

GroupElement wreath_rho(const WreathGroup& w, const GroupElement& e, const WreathStage& stage, SupportPolicy policy) {
  w.require(e, "wreath element");
  if (!stage.stage.map.group()->same_as(*w.acting())) {
    fail(ErrorCode::FamilyMismatch, "stage map is on " + stage.stage.map.group()->describe() + ", acting group is " +
                                        w.acting()->describe());
  }
  const auto& we = *e.get_if<WreathElement>();
  const OrbitWitness& wit = stage.stage.witness;
  const auto bottom = stage_base_group(w, stage);

  // Lamps of g inside E_i, as (index in E_i, value).
  std::vector<std::pair<std::size_t, GroupElement>> kept;
  for (std::size_t k = 0; k < we.support.points.size(); ++k) {
    const std::size_t j = wit.E.index_of(we.support.points[k]);
    if (j == wit.E.size()) {
      if (policy == SupportPolicy::Strict) {
        fail(ErrorCode::Contract, "support point " + w.action()->format_point(we.support.points[k]) + " of " +
                                      w.format(e) + " escapes E_i; enlarge the stage");
      }
      continue;
    }
    kept.emplace_back(j, we.support.values[k]);
  }

  const Permutation& sigma = stage.stage.map.at(*we.h);
  SemidirectElement out{std::vector<GroupElement>(sigma.size(), bottom->identity()), sigma};
  for (std::size_t k = 0; k < wit.S.size(); ++k) {
    std::vector<std::pair<Point, GroupElement>> lamps;
    for (const auto& [j, v] : kept) lamps.emplace_back(label_point(wit.pi[k][j]), v);
    out.f[wit.S[k]] = bottom->element(std::move(lamps));
  }
  return GroupElement(std::move(out));
}

Permutation wreath_embed(const SoficMap& base, const PermWreathGroup& target, const GroupElement& u) {
  target.require(u, "semidirect element");
  if (!base.group()->same_as(*target.base())) {
    fail(ErrorCode::FamilyMismatch, "base map is on " + base.group()->describe() + ", not " + target.base()->describe());
  }
  const auto& se = *u.get_if<SemidirectElement>();
  const std::size_t A = target.carrier();
  const std::size_t E0 = base.carrier_size();
  std::vector<const Permutation*> column(A);
  for (std::size_t a = 0; a < A; ++a) column[a] = &base.at(se.f[se.sigma(a)]);
  std::vector<std::uint32_t> images(E0 * A);
  for (std::size_t x = 0; x < E0; ++x) {
    for (std::size_t a = 0; a < A; ++a) {
      images[x * A + a] = static_cast<std::uint32_t>((*column[a])(x) * A + se.sigma(a));
    }
  }
  return Permutation::from_trusted(std::move(images));
}

Rational measured_stage_eps(const WreathStage& stage) {
  const auto mult = check_multiplicative(stage.stage.map, stage.F_i, Rational(1));
  const Rational fraction(static_cast<std::int64_t>(stage.stage.witness.S.size()),
                          static_cast<std::int64_t>(stage.stage.map.carrier_size()));
  return std::max(mult.mult_defect_max, Rational(1) - fraction);
}

WreathResult wreath_sofic_map(const WreathGroup& w, const Window& F, const WreathStage& stage, const Rational& eps,
                              std::size_t carrier_cap) {
  const GroupPtr self = w.shared_from_this();
  if (!F.group()->same_as(w)) fail(ErrorCode::FamilyMismatch, "F lives in " + F.group()->describe());
  if (!F.contains_identity() || !F.symmetric()) fail(ErrorCode::Contract, "F must be symmetric and contain the identity");

  const auto target = stage_target_group(w, stage);
  const Window domain = F.united(F.product(F));
  std::vector<GroupElement> rho;
  std::vector<GroupElement> values{target->base()->identity()};
  std::set<std::string> seen{encode(values.front())};
  for (const auto& d : domain.elements()) {
    rho.push_back(wreath_rho(w, d, stage, F.contains(d) ? SupportPolicy::Strict : SupportPolicy::Project));
    for (const auto& v : rho.back().get_if<SemidirectElement>()->f) {
      if (seen.insert(encode(v)).second) values.push_back(v);
    }
  }
  if (!stage.base_provider->group()->same_as(*target->base())) {
    fail(ErrorCode::FamilyMismatch, "base provider is for " + stage.base_provider->group()->describe() + ", stage needs " +
                                        target->base()->describe());
  }
  const SoficMap base = stage.base_provider->map_on(Window(target->base(), std::move(values)));
  const std::size_t carrier = base.carrier_size() * target->carrier();
  if (base.carrier_size() > carrier_cap / target->carrier()) {
    fail(ErrorCode::CapOverflow, "wreath carrier " + std::to_string(carrier) + " exceeds cap " + std::to_string(carrier_cap) +
                                     " (required cap " + std::to_string(carrier) + ")");
  }
  std::vector<Permutation> perms;
  for (const auto& u : rho) perms.push_back(wreath_embed(base, *target, u));
  SoficMap map(self, carrier, domain.elements(), std::move(perms));

  WreathResult out{std::move(map), {}, {}, measured_stage_eps(stage)};
  out.mult = check_multiplicative(out.map, F, eps);
  out.separation = check_separation(out.map, F, eps);
  return out;
}

}  // namespace sofic
