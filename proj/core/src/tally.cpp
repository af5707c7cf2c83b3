#include "tdre/tally.hpp"

namespace tdre {

double DyadTally::edge_density() const {
  const double pairs = double(n) * (n - 1);
  if (pairs == 0) return 0.0;
  // each a01 entry is one edge (j -> i); each a11 entry is one edge
  return (double(a01.size()) + double(a11.size())) / pairs;
}

Matrix DyadTally::dense_state(int a, int b) const {
  Matrix m = Matrix::Zero(n, n);
  if (a == 0 && b == 0) {
    m.setOnes();
    m.diagonal().setZero();
    for (auto [i, j] : a01) {
      m(i, j) = 0.0;
      m(j, i) = 0.0;
    }
    for (auto [i, j] : a11) m(i, j) = 0.0;
    return m;
  }
  if (a == 0 && b == 1) {
    for (auto [i, j] : a01) m(i, j) = 1.0;
  } else if (a == 1 && b == 0) {
    for (auto [i, j] : a01) m(j, i) = 1.0;
  } else {
    for (auto [i, j] : a11) m(i, j) = 1.0;
  }
  return m;
}

DyadTally tally(const Digraph& g) {
  DyadTally t;
  t.n = g.n;
  t.out_degree.assign(g.n, 0);
  t.in_degree.assign(g.n, 0);
  const auto& e = g.edges;
  for (auto [s, d] : e) {
    t.out_degree[s]++;
    t.in_degree[d]++;
  }
  // transpose by counting sort (edges are sorted, so each destination bucket
  // fills in source order and rev stays lexicographic), then one merge scan:
  // edges ∩ rev are the mutual ordered pairs, rev \ edges the A01 entries
  std::vector<std::size_t> at(g.n + 1, 0);
  for (auto [s, d] : e) at[d + 1]++;
  for (int i = 0; i < g.n; ++i) at[i + 1] += at[i];
  std::vector<std::pair<std::int32_t, std::int32_t>> rev(e.size());
  for (auto [s, d] : e) rev[at[d]++] = {d, s};

  std::size_t i = 0, j = 0;
  while (i < e.size() && j < rev.size()) {
    if (e[i] == rev[j]) {
      t.a11.push_back(e[i]);
      ++i, ++j;
    } else if (e[i] < rev[j]) {
      ++i;
    } else {
      t.a01.push_back(rev[j]);
      ++j;
    }
  }
  for (; j < rev.size(); ++j) t.a01.push_back(rev[j]);
  return t;
}

}  // namespace tdre
