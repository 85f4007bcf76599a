#include <algorithm>
#include <map>
#include <numeric>

#include "sofic/construct.hpp"
#include "sofic/error.hpp"

namespace sofic {

namespace {

/// Lexicographic rank of a permutation of {0..m-1}.
std::uint32_t lehmer_rank(const std::vector<std::uint32_t>& p, const std::vector<std::uint32_t>& fact) {
  std::uint32_t rank = 0;
  const std::size_t m = p.size();
  for (std::size_t i = 0; i < m; ++i) {
    std::uint32_t smaller = 0;
    for (std::size_t j = i + 1; j < m; ++j) smaller += p[j] < p[i] ? 1 : 0;
    rank += smaller * fact[m - 1 - i];
  }
  return rank;
}

}  // namespace

Construction free_construct(const Action& a, const Window& F, const PointWindow& E, CompletionPolicy policy,
                            std::uint64_t seed, std::size_t carrier_cap) {
  const auto* free = dynamic_cast<const FreeGroup*>(a.group().get());
  if (free == nullptr) fail(ErrorCode::FamilyMismatch, "free construction needs a free group, got " + a.group()->describe());
  if (!F.group()->same_as(*a.group())) {
    fail(ErrorCode::FamilyMismatch, "F lives in " + F.group()->describe() + ", action is by " + a.group()->describe());
  }
  const GroupPtr& G = a.group();
  std::vector<GroupElement> letters;
  for (std::size_t i = 0; i < free->rank(); ++i) letters.push_back(free->word({static_cast<std::int32_t>(i + 1)}));

  std::vector<Point> B;
  std::map<Point, std::uint32_t> where;
  auto add = [&](const Point& p) {
    if (where.emplace(p, static_cast<std::uint32_t>(B.size())).second) B.push_back(p);
  };
  for (const auto& x : E.points()) add(x);
  for (const auto& w : F.elements()) {
    for (const GroupElement& word : {w, G->inv(w)}) {
      const auto& ls = word.get_if<FreeWord>()->letters;
      for (const auto& x : E.points()) {
        Point y = x;
        for (auto it = ls.rbegin(); it != ls.rend(); ++it) {
          const GroupElement& gen = letters[static_cast<std::size_t>(std::abs(*it) - 1)];
          y = a.apply(*it > 0 ? gen : G->inv(gen), y);
          add(y);
        }
      }
    }
  }

  const std::size_t m = B.size();
  if (m == 0) fail(ErrorCode::Contract, "free construction needs a nonempty E");
  std::vector<std::uint32_t> fact(m + 1, 1);
  std::uint64_t carrier = 1;
  for (std::size_t k = 1; k <= m; ++k) {
    carrier *= k;
    if (carrier > carrier_cap) {
      std::uint64_t required = carrier;
      for (std::size_t r = k + 1; r <= m && required < (1ULL << 62) / r; ++r) required *= r;
      fail(ErrorCode::CapOverflow, "carrier |B|! with |B| = " + std::to_string(m) + " exceeds cap " +
                                       std::to_string(carrier_cap) + " (required cap " + std::to_string(required) + ")");
    }
    fact[k] = static_cast<std::uint32_t>(carrier);
  }

  // psi(generator): the partial action on B, completed.
  std::vector<Permutation> psi;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    PartialInjection partial;
    for (std::uint32_t b = 0; b < m; ++b) {
      const auto it = where.find(a.apply(letters[i], B[b]));
      if (it != where.end()) partial.add(b, it->second);
    }
    psi.push_back(extend_partial(partial, m, policy, seed + i));
  }
  std::vector<Permutation> psi_inv;
  for (const auto& p : psi) psi_inv.push_back(inverse(p));

  std::vector<std::vector<std::uint32_t>> sym;
  std::vector<std::uint32_t> cur(m);
  std::iota(cur.begin(), cur.end(), 0U);
  do {
    sym.push_back(cur);
  } while (std::next_permutation(cur.begin(), cur.end()));

  const Window domain = F.united(F.product(F));
  std::vector<Permutation> perms;
  for (const auto& w : domain.elements()) {
    Permutation p = Permutation::identity(m);
    for (std::int32_t l : w.get_if<FreeWord>()->letters) {
      const auto i = static_cast<std::size_t>(std::abs(l) - 1);
      p = compose(p, l > 0 ? psi[i] : psi_inv[i]);
    }
    std::vector<std::uint32_t> images(sym.size());
    std::vector<std::uint32_t> ps(m);
    for (std::size_t r = 0; r < sym.size(); ++r) {
      for (std::size_t j = 0; j < m; ++j) ps[j] = p(sym[r][j]);
      images[r] = lehmer_rank(ps, fact);
    }
    perms.push_back(Permutation::from_trusted(std::move(images)));
  }
  SoficMap map(G, sym.size(), domain.elements(), std::move(perms));

  OrbitWitness w;
  w.E = E;
  w.labels_size = static_cast<std::uint32_t>(m);
  std::vector<std::uint32_t> inv(m);
  for (std::size_t r = 0; r < sym.size(); ++r) {
    for (std::size_t j = 0; j < m; ++j) inv[sym[r][j]] = static_cast<std::uint32_t>(j);
    std::vector<std::uint32_t> row;
    for (const auto& x : E.points()) row.push_back(inv[where.at(x)]);
    w.S.push_back(static_cast<std::uint32_t>(r));
    w.pi.push_back(std::move(row));
  }

  Construction out{std::move(map), std::move(w)};
  out.notes.emplace_back("B", std::to_string(m));
  out.notes.emplace_back("carrier", std::to_string(sym.size()));
  return out;
}

}  // namespace sofic
