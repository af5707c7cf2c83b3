#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <vector>

#include "tdre/model.hpp"
#include "tdre/rng.hpp"
#include "tdre/sample.hpp"
#include "tdre/tally.hpp"

using namespace tdre;

namespace {

using PairList = std::vector<std::pair<std::int32_t, std::int32_t>>;

// reference census straight from an adjacency matrix
void reference(const Digraph& g, PairList& a01, PairList& a11) {
  std::vector<std::vector<bool>> adj(g.n, std::vector<bool>(g.n, false));
  for (auto [s, d] : g.edges) adj[s][d] = true;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      if (i == j) continue;
      if (!adj[i][j] && adj[j][i]) a01.push_back({i, j});
      if (adj[i][j] && adj[j][i]) a11.push_back({i, j});
    }
}

}  // namespace

TEST_CASE("census matches the adjacency-matrix definition") {
  for (std::uint64_t s = 0; s < 12; ++s) {
    const int n = 30;
    const double theta = s % 2 ? -0.3 : -1.8;
    Digraph g = sample_graph(linear_design(n, 0.6, theta), 900 + s);
    DyadTally t = tally(g);

    PairList a01, a11;
    reference(g, a01, a11);
    PairList got01 = t.a01, got11 = t.a11;
    std::sort(got01.begin(), got01.end());
    std::sort(got11.begin(), got11.end());
    CHECK(got01 == a01);
    CHECK(got11 == a11);

    CHECK(t.out_degree == std::vector<int>(g.out_degrees()));
    CHECK(t.in_degree == std::vector<int>(g.in_degrees()));
    CHECK(t.asym_dyads() == a01.size());
    CHECK(t.mutual_dyads() == a11.size() / 2);
    CHECK(t.edge_density() ==
          doctest::Approx(double(g.edge_count()) / (n * (n - 1))).epsilon(1e-14));
  }
}

TEST_CASE("dense configuration matrices agree with the lists") {
  Digraph g = sample_graph(linear_design(16, 0.4, -0.4), 3);
  DyadTally t = tally(g);
  Matrix a01 = t.dense_state(0, 1);
  Matrix a10 = t.dense_state(1, 0);
  Matrix a11 = t.dense_state(1, 1);
  Matrix a00 = t.dense_state(0, 0);
  for (int i = 0; i < 16; ++i) {
    CHECK(a00(i, i) == 0.0);
    for (int j = 0; j < 16; ++j) {
      if (i != j) CHECK(a00(i, j) + a01(i, j) + a10(i, j) + a11(i, j) == 1.0);
      CHECK(a01(i, j) == a10(j, i));
      CHECK(a11(i, j) == a11(j, i));
    }
  }
  double from_list = 0;
  for (auto [i, j] : t.a01) from_list += a01(i, j);
  CHECK(from_list == double(t.a01.size()));
}

TEST_CASE("empty and saturated graphs") {
  Digraph empty = Digraph::make(5, {});
  DyadTally te = tally(empty);
  CHECK(te.asym_dyads() == 0);
  CHECK(te.mutual_dyads() == 0);
  CHECK(te.edge_density() == 0.0);

  std::vector<std::pair<std::int32_t, std::int32_t>> all;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      if (i != j) all.push_back({i, j});
  DyadTally tf = tally(Digraph::make(5, all));
  CHECK(tf.asym_dyads() == 0);
  CHECK(tf.mutual_dyads() == 10);
  CHECK(tf.edge_density() == 1.0);

  // one-directional tournament: every dyad asymmetric
  std::vector<std::pair<std::int32_t, std::int32_t>> up;
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) up.push_back({i, j});
  DyadTally tu = tally(Digraph::make(5, up));
  CHECK(tu.asym_dyads() == 10);
  CHECK(tu.mutual_dyads() == 0);
}

TEST_CASE("census output is deterministic and ordered") {
  Digraph g = sample_graph(linear_design(24, 0.2, -0.6), 17);
  DyadTally a = tally(g), b = tally(g);
  CHECK(a.a01 == b.a01);
  CHECK(a.a11 == b.a11);
  CHECK(std::is_sorted(a.a01.begin(), a.a01.end()));
  CHECK(std::is_sorted(a.a11.begin(), a.a11.end()));
}
