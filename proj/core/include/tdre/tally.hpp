#pragma once

#include <cstdint>
#include <vector>

#include "tdre/graph.hpp"
#include "tdre/model.hpp"

namespace tdre {

/**
 * Dyad census. A^{ab}[i][j] = 1 iff (X_ij, X_ji) = (a,b); zero diagonals.
 * Asymmetric and mutual configurations are stored as ordered pair lists
 * (A00 is the implicit complement), with dense materialization on demand.
 */
struct DyadTally {
  int n = 0;
  // ordered pairs (i,j) with A01[i][j] = 1, i.e. X_ij = 0 and X_ji = 1
  std::vector<std::pair<std::int32_t, std::int32_t>> a01;
  // ordered pairs (i,j) with A11[i][j] = 1 (list contains both orientations)
  std::vector<std::pair<std::int32_t, std::int32_t>> a11;
  std::vector<int> out_degree, in_degree;

  std::size_t asym_dyads() const { return a01.size(); }
  std::size_t mutual_dyads() const { return a11.size() / 2; }

  // share of ordered pairs that carry an edge
  double edge_density() const;

  // dense 0/1 matrix for configuration (a,b), double entries
  Matrix dense_state(int a, int b) const;
};

DyadTally tally(const Digraph& g);

}  // namespace tdre
