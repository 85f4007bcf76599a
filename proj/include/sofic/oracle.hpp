#pragma once

#include <cstddef>
#include <optional>

#include "sofic/actions.hpp"
#include "sofic/approx.hpp"

namespace sofic {

struct OracleCaps {
  std::size_t carrier = 10;
  std::size_t window_E = 5;
  std::size_t window_F = 5;
};

struct OracleResult {
  std::size_t best_S_size = 0;
  std::optional<OrbitWitness> best_witness;
  bool search_space_exhausted = false;
};

/// Largest S admitting consistent injective labelings, by exhaustive search:
/// subsets in decreasing size, lexicographic within a size; the constraints
/// pi_{phi(g)s}(x) = pi_s(alpha(g^{-1})x) are merged by union-find and a
/// subset is accepted when no two points of one E row share a class.
/// Throws CapOverflow beyond the caps.
OracleResult oracle_max_witness(const SoficMap& m, const Action& a, const Window& F, const PointWindow& E,
                                const OracleCaps& caps = {});

/// Direct re-check of the orbit-approximation condition over every triple
/// (g, s, x) in lexicographic order, without early exit.
bool oracle_verify(const SoficMap& m, const OrbitWitness& w, const Action& a, const Window& F, const PointWindow& E,
                   const Rational& eps, const OracleCaps& caps = {});

}  // namespace sofic
