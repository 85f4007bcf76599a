#include "sofic/construct.hpp"
#include "sofic/error.hpp"

namespace sofic {

Rational combine_part_eps(const Rational& eps, std::size_t parts) {
  if (parts == 0) fail(ErrorCode::Contract, "no parts to combine");
  return eps / Rational(static_cast<std::int64_t>(parts));
}

Construction combine_orbits(const DisjointUnionAction& action, const std::vector<const Construction*>& parts,
                            const Window& F, std::size_t carrier_cap) {
  if (parts.size() != action.parts().size()) {
    fail(ErrorCode::Contract, std::to_string(parts.size()) + " constructions for " +
                                  std::to_string(action.parts().size()) + " orbits");
  }
  const GroupPtr& G = action.group();
  if (!F.group()->same_as(*G)) fail(ErrorCode::FamilyMismatch, "F lives in " + F.group()->describe());
  const Window domain = F.united(F.product(F));

  std::vector<std::size_t> sizes;
  std::size_t carrier = 1;
  for (const auto* c : parts) {
    if (!c->map.group()->same_as(*G)) fail(ErrorCode::FamilyMismatch, "part map is on " + c->map.group()->describe());
    require_domain(c->map, domain, "F.F");
    const std::size_t n = c->map.carrier_size();
    if (carrier > carrier_cap / n) {
      fail(ErrorCode::CapOverflow, "product carrier exceeds cap " + std::to_string(carrier_cap));
    }
    carrier *= n;
    sizes.push_back(n);
  }
  // stride[k]: weight of part k in the row-major index.
  std::vector<std::size_t> stride(parts.size(), 1);
  for (std::size_t k = parts.size(); k-- > 1;) stride[k - 1] = stride[k] * sizes[k];

  std::vector<Permutation> perms;
  for (const auto& g : domain.elements()) {
    std::vector<const Permutation*> pk;
    for (const auto* c : parts) pk.push_back(&c->map.at(g));
    std::vector<std::uint32_t> images(carrier);
    for (std::size_t i = 0; i < carrier; ++i) {
      std::size_t out = 0;
      for (std::size_t k = 0; k < parts.size(); ++k) out += stride[k] * (*pk[k])((i / stride[k]) % sizes[k]);
      images[i] = static_cast<std::uint32_t>(out);
    }
    perms.push_back(Permutation::from_trusted(std::move(images)));
  }
  SoficMap map(G, carrier, domain.elements(), std::move(perms));

  OrbitWitness w;
  std::vector<Point> points;
  std::vector<std::uint32_t> offset;
  std::uint32_t labels = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    for (const auto& p : parts[k]->witness.E.points()) points.push_back(action.embed(k, p));
    offset.push_back(labels);
    labels += parts[k]->witness.labels_size;
  }
  w.E = PointWindow(std::move(points));
  w.labels_size = labels;

  bool more = true;
  for (const auto* c : parts) more = more && !c->witness.S.empty();
  std::vector<std::size_t> pos(parts.size(), 0);
  while (more) {
    std::size_t s = 0;
    std::vector<std::uint32_t> row;
    for (std::size_t k = 0; k < parts.size(); ++k) {
      s += stride[k] * parts[k]->witness.S[pos[k]];
      for (std::uint32_t label : parts[k]->witness.pi[pos[k]]) row.push_back(label + offset[k]);
    }
    w.S.push_back(static_cast<std::uint32_t>(s));
    w.pi.push_back(std::move(row));
    more = false;
    for (std::size_t k = parts.size(); k-- > 0;) {
      if (++pos[k] < parts[k]->witness.S.size()) {
        more = true;
        break;
      }
      pos[k] = 0;
    }
  }
  Construction out{std::move(map), std::move(w)};
  out.notes.emplace_back("carrier", std::to_string(carrier));
  return out;
}

Construction restrict_or_quotient(const Construction& c, const Homomorphism& hom, const Window& F_new) {
  if (!hom.target->same_as(*c.map.group())) {
    fail(ErrorCode::FamilyMismatch, "homomorphism lands in " + hom.target->describe() + ", map is on " +
                                        c.map.group()->describe());
  }
  if (!F_new.group()->same_as(*hom.source)) fail(ErrorCode::FamilyMismatch, "F lives in " + F_new.group()->describe());
  const Window domain = F_new.united(F_new.product(F_new));
  std::vector<Permutation> perms;
  for (const auto& g : domain.elements()) {
    const GroupElement image = hom(g);
    if (!c.map.defined_at(image)) {
      fail(ErrorCode::IncompleteWindow, "image " + hom.target->format(image) + " of " + hom.source->format(g) +
                                            " lies outside the domain window");
    }
    perms.push_back(c.map.at(image));
  }
  Construction out{SoficMap(hom.source, c.map.carrier_size(), domain.elements(), std::move(perms)), c.witness};
  out.notes.emplace_back("hom", hom.name);
  return out;
}

}  // namespace sofic
