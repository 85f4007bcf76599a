#include "sofic/oracle.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "sofic/error.hpp"

namespace sofic {

namespace {

void check_caps(const SoficMap& m, const Window& F, const PointWindow& E, const OracleCaps& caps) {
  if (m.carrier_size() > caps.carrier) {
    fail(ErrorCode::CapOverflow, "oracle carrier " + std::to_string(m.carrier_size()) + " exceeds cap " +
                                     std::to_string(caps.carrier));
  }
  if (E.size() > caps.window_E) fail(ErrorCode::CapOverflow, "oracle |E| exceeds cap " + std::to_string(caps.window_E));
  if (F.size() > caps.window_F) fail(ErrorCode::CapOverflow, "oracle |F| exceeds cap " + std::to_string(caps.window_F));
}

struct Dsu {
  std::vector<std::size_t> p;
  explicit Dsu(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) p[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

OracleResult oracle_max_witness(const SoficMap& m, const Action& a, const Window& F, const PointWindow& E,
                                const OracleCaps& caps) {
  check_caps(m, F, E, caps);
  require_domain(m, F, "F");
  const std::size_t n = m.carrier_size();
  const std::size_t e = E.size();

  std::vector<std::vector<std::size_t>> pre;
  std::vector<const Permutation*> perm;
  for (const auto& g : F.elements()) {
    const GroupElement g_inv = m.group()->inv(g);
    std::vector<std::size_t> row(e);
    for (std::size_t j = 0; j < e; ++j) row[j] = E.index_of(a.apply(g_inv, E.points()[j]));
    pre.push_back(std::move(row));
    perm.push_back(&m.at(g));
  }

  OracleResult result;
  for (std::size_t k = n + 1; k-- > 0;) {
    // Lexicographic k-subsets of {0..n-1}.
    std::vector<std::uint32_t> idx(k);
    std::iota(idx.begin(), idx.end(), 0U);
    while (true) {
      std::vector<std::int64_t> slot(n, -1);
      for (std::size_t i = 0; i < k; ++i) slot[idx[i]] = static_cast<std::int64_t>(i);
      Dsu dsu(k * e);
      for (std::size_t gi = 0; gi < perm.size(); ++gi) {
        for (std::size_t i = 0; i < k; ++i) {
          const std::int64_t t = slot[(*perm[gi])(idx[i])];
          if (t < 0) continue;
          for (std::size_t j = 0; j < e; ++j) {
            if (pre[gi][j] < e) dsu.unite(static_cast<std::size_t>(t) * e + j, i * e + pre[gi][j]);
          }
        }
      }
      bool ok = true;
      for (std::size_t i = 0; i < k && ok; ++i) {
        for (std::size_t j = 0; j < e && ok; ++j) {
          for (std::size_t l = j + 1; l < e && ok; ++l) ok = dsu.find(i * e + j) != dsu.find(i * e + l);
        }
      }
      if (ok) {
        OrbitWitness w;
        w.E = E;
        w.S = idx;
        std::map<std::size_t, std::uint32_t> label;
        for (std::size_t i = 0; i < k; ++i) {
          std::vector<std::uint32_t> row;
          for (std::size_t j = 0; j < e; ++j) {
            const auto [it, fresh] = label.emplace(dsu.find(i * e + j), static_cast<std::uint32_t>(label.size()));
            row.push_back(it->second);
          }
          w.pi.push_back(std::move(row));
        }
        w.labels_size = static_cast<std::uint32_t>(label.size());
        result.best_S_size = k;
        result.best_witness = std::move(w);
        result.search_space_exhausted = true;
        return result;
      }
      // Next subset.
      std::size_t i = k;
      while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t r = i; r < k; ++r) idx[r] = idx[r - 1] + 1;
    }
  }
  result.search_space_exhausted = true;
  return result;
}

bool oracle_verify(const SoficMap& m, const OrbitWitness& w, const Action& a, const Window& F, const PointWindow& E,
                   const Rational& eps, const OracleCaps& caps) {
  check_caps(m, F, E, caps);
  require_domain(m, F, "F");
  const std::size_t n = m.carrier_size();
  std::map<std::uint32_t, std::map<Point, std::uint32_t>> pi;
  if (w.pi.size() != w.S.size()) fail(ErrorCode::MalformedWitness, "pi is not defined for every s in S");
  for (std::size_t k = 0; k < w.S.size(); ++k) {
    if (w.pi[k].size() != w.E.size()) fail(ErrorCode::MalformedWitness, "pi row has the wrong length");
    for (std::size_t j = 0; j < w.E.size(); ++j) pi[w.S[k]][w.E.points()[j]] = w.pi[k][j];
  }
  if (!(w.E == E)) return false;
  bool ok = pi.size() == w.S.size();
  ok = ok && static_cast<std::int64_t>(pi.size()) * eps.denominator() >
                 (eps.denominator() - eps.numerator()) * static_cast<std::int64_t>(n);
  for (const auto& [s, row] : pi) {
    ok = ok && s < n;
    for (const auto& [x, lx] : row) {
      for (const auto& [y, ly] : row) {
        if (!(x == y) && lx == ly) ok = false;
      }
    }
  }
  for (const auto& g : F.elements()) {
    const Permutation& pg = m.at(g);
    const GroupElement g_inv = m.group()->inv(g);
    for (std::uint32_t s = 0; s < n; ++s) {
      for (const auto& x : E.points()) {
        const auto it_s = pi.find(s);
        const auto it_t = pi.find(pg(s));
        const Point y = a.apply(g_inv, x);
        if (it_s == pi.end() || it_t == pi.end() || !E.contains(y)) continue;
        if (it_t->second.at(x) != it_s->second.at(y)) ok = false;
      }
    }
  }
  return ok;
}

}  // namespace sofic
