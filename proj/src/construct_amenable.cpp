#include <map>
#include <set>

#include "sofic/construct.hpp"
#include "sofic/error.hpp"

namespace sofic {

namespace {

void require_symmetric(const Window& F) {
  if (!F.contains_identity()) fail(ErrorCode::Contract, "F must contain the identity");
  if (!F.symmetric()) fail(ErrorCode::Contract, "F must be symmetric");
}

}  // namespace

Construction amenable_construct(const Action& a, const std::vector<GroupElement>& folner, const Window& F,
                                const PointWindow& E, CompletionPolicy policy, std::uint64_t seed) {
  const GroupPtr& G = a.group();
  if (!F.group()->same_as(*G)) {
    fail(ErrorCode::FamilyMismatch, "F lives in " + F.group()->describe() + ", action is by " + G->describe());
  }
  require_symmetric(F);
  if (folner.empty()) fail(ErrorCode::Contract, "Folner set must be nonempty");
  const Window A(G, folner);
  const std::size_t n = A.size();
  std::map<std::string, std::uint32_t> index;
  for (std::size_t i = 0; i < n; ++i) index.emplace(encode(A.elements()[i]), static_cast<std::uint32_t>(i));
  auto find = [&](const GroupElement& g) {
    const auto it = index.find(encode(g));
    return it == index.end() ? static_cast<std::int64_t>(-1) : static_cast<std::int64_t>(it->second);
  };

  const Window domain = F.united(F.product(F));
  std::vector<Permutation> perms;
  perms.reserve(domain.size());
  for (std::size_t k = 0; k < domain.size(); ++k) {
    const GroupElement& g = domain.elements()[k];
    PartialInjection partial;
    for (std::uint32_t i = 0; i < n; ++i) {
      const std::int64_t j = find(G->mul(g, A.elements()[i]));
      if (j >= 0) partial.add(i, static_cast<std::uint32_t>(j));
    }
    perms.push_back(extend_partial(partial, n, policy, seed + k));
  }
  SoficMap map(G, n, domain.elements(), std::move(perms));

  OrbitWitness w;
  w.E = E;
  for (std::uint32_t s = 0; s < n; ++s) {
    bool inside = true;
    for (const auto& g : F.elements()) inside = inside && find(G->mul(g, A.elements()[s])) >= 0;
    if (inside) w.S.push_back(s);
  }

  // B: the points alpha(s^{-1})x over the whole Folner set, in codec order.
  std::vector<std::vector<Point>> moved(n);
  std::set<Point> labels;
  for (std::uint32_t s = 0; s < n; ++s) {
    const GroupElement s_inv = G->inv(A.elements()[s]);
    for (const auto& x : E.points()) {
      moved[s].push_back(a.apply(s_inv, x));
      labels.insert(moved[s].back());
    }
  }
  const std::vector<Point> label_list(labels.begin(), labels.end());
  w.labels_size = static_cast<std::uint32_t>(label_list.size());
  for (std::uint32_t s : w.S) {
    std::vector<std::uint32_t> row;
    for (const auto& p : moved[s]) {
      row.push_back(static_cast<std::uint32_t>(std::lower_bound(label_list.begin(), label_list.end(), p) - label_list.begin()));
    }
    w.pi.push_back(std::move(row));
  }

  Construction out{std::move(map), std::move(w)};
  out.notes.emplace_back("carrier", std::to_string(n));
  out.notes.emplace_back("core", std::to_string(out.witness.S.size()));
  return out;
}

}  // namespace sofic
