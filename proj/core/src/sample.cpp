#include "tdre/sample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tdre/rng.hpp"

namespace tdre {

namespace {

// linear index of dyad (i,j), i<j, rows first
inline std::uint64_t dyad_index(std::uint64_t n, std::uint64_t i, std::uint64_t j) {
  return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

struct DyadLaw {
  double e00, e01, e10, e11, k;  // unnormalized weights and their sum
};

inline DyadLaw dyad_law(const ParamVector& p, int i, int j) {
  const double w10 = p.theta + p.alpha[i] + p.beta[j];
  const double w01 = p.theta + p.alpha[j] + p.beta[i];
  const double w11 = w10 + w01 + p.rho;
  const double m = std::max({0.0, w01, w10, w11});
  DyadLaw d;
  d.e00 = std::exp(-m);
  d.e01 = std::exp(w01 - m);
  d.e10 = std::exp(w10 - m);
  d.e11 = std::exp(w11 - m);
  d.k = d.e00 + d.e01 + d.e10 + d.e11;
  return d;
}

inline void place(std::vector<std::pair<std::int32_t, std::int32_t>>& edges,
                  const DyadLaw& d, double u, int i, int j) {
  const double scaled = u * d.k;
  if (scaled < d.e00) return;
  if (scaled < d.e00 + d.e01) {
    edges.emplace_back(j, i);
  } else if (scaled < d.e00 + d.e01 + d.e10) {
    edges.emplace_back(i, j);
  } else {
    edges.emplace_back(i, j);
    edges.emplace_back(j, i);
  }
}

// largest value of x[i] + y[j] over i != j
double cross_max(const Vector& x, const Vector& y) {
  const int n = static_cast<int>(x.size());
  int ix = 0, iy = 0;
  for (int i = 1; i < n; ++i) {
    if (x[i] > x[ix]) ix = i;
    if (y[i] > y[iy]) iy = i;
  }
  if (ix != iy) return x[ix] + y[iy];
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    if (i != ix) best = std::max(best, x[ix] + y[i]);
    if (i != iy) best = std::max(best, x[i] + y[iy]);
  }
  return best;
}

// sum of the two largest entries of x + y (distinct indices)
double top_two_sum(const Vector& x, const Vector& y) {
  double m1 = -std::numeric_limits<double>::infinity(), m2 = m1;
  for (int i = 0; i < x.size(); ++i) {
    const double v = x[i] + y[i];
    if (v > m1) {
      m2 = m1;
      m1 = v;
    } else if (v > m2) {
      m2 = v;
    }
  }
  return m1 + m2;
}

}  // namespace

Digraph sample_graph(const ParamVector& p, std::uint64_t seed) {
  if (!p.is_finite()) throw Error(ErrorKind::InvalidDesign, "non-finite parameters");
  const int n = p.n();
  if (n < 2) throw Error(ErrorKind::InvalidDesign, "need at least 2 nodes");
  CounterRng rng(seed);
  std::vector<std::pair<std::int32_t, std::int32_t>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const DyadLaw d = dyad_law(p, i, j);
      place(edges, d, rng.uniform(dyad_index(n, i, j)), i, j);
    }
  }
  return Digraph::make(n, std::move(edges));
}

Digraph sample_graph_sparse(const ParamVector& p, std::uint64_t seed) {
  if (!p.is_finite()) throw Error(ErrorKind::InvalidDesign, "non-finite parameters");
  const int n = p.n();
  if (n < 2) throw Error(ErrorKind::InvalidDesign, "need at least 2 nodes");

  // upper bound on the non-null probability of any dyad
  const double wab = cross_max(p.alpha, p.beta);
  const double b01 = p.theta + wab;
  const double b10 = b01;
  const double b11 = 2 * p.theta + top_two_sum(p.alpha, p.beta) + p.rho;
  const double m = std::max({0.0, b01, b10, b11});
  const double s = std::exp(b01 - m) + std::exp(b10 - m) + std::exp(b11 - m);
  const double qmax = s / (std::exp(-m) + s);

  if (qmax >= 0.2) return sample_graph(p, seed);

  CounterRng rng(seed);
  SequentialRng skip(rng.substream(1));
  const std::uint64_t total = std::uint64_t(n) * (n - 1) / 2;
  const double log1mq = std::log1p(-qmax);

  std::vector<std::pair<std::int32_t, std::int32_t>> edges;
  std::uint64_t pos = 0;
  std::uint64_t row = 0;                           // current row i of pos
  std::uint64_t row_end = std::uint64_t(n) - 1;    // one past the last index of row i
  while (true) {
    const double u = std::max(skip.uniform(), 0x1.0p-60);
    const double step = std::floor(std::log(u) / log1mq);
    if (step >= static_cast<double>(total)) break;
    pos += 1 + static_cast<std::uint64_t>(step);
    if (pos > total) break;
    const std::uint64_t here = pos - 1;
    while (here >= row_end) {
      ++row;
      row_end += std::uint64_t(n) - 1 - row;
    }
    const std::uint64_t row_begin = row_end - (std::uint64_t(n) - 1 - row);
    const int i = static_cast<int>(row);
    const int j = static_cast<int>(here - row_begin + row + 1);
    const DyadLaw d = dyad_law(p, i, j);
    const double q = (d.e01 + d.e10 + d.e11) / d.k;
    if (rng.uniform(2 * here) * qmax >= q) continue;  // thin to the true rate
    const double u2 = rng.uniform(2 * here + 1) * (d.e01 + d.e10 + d.e11);
    if (u2 < d.e01) {
      edges.emplace_back(j, i);
    } else if (u2 < d.e01 + d.e10) {
      edges.emplace_back(i, j);
    } else {
      edges.emplace_back(i, j);
      edges.emplace_back(j, i);
    }
  }
  return Digraph::make(n, std::move(edges));
}

}  // namespace tdre
