#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>

#include "tdre/inference.hpp"
#include "tdre/model.hpp"
#include "tdre/sample.hpp"
#include "tdre/tally.hpp"

using namespace tdre;

namespace {

// dyad configuration frequencies from R replicate two-node graphs
std::array<double, 4> dyad_freqs(const ParamVector& p, bool sparse, std::uint64_t seed0,
                                 int reps) {
  std::array<double, 4> f{0, 0, 0, 0};
  for (int r = 0; r < reps; ++r) {
    Digraph g = sparse ? sample_graph_sparse(p, seed0 + r) : sample_graph(p, seed0 + r);
    bool x01 = false, x10 = false;
    for (auto [s, d] : g.edges) (s == 0 ? x01 : x10) = true;
    f[(x01 ? 2 : 0) + (x10 ? 1 : 0)] += 1.0;
  }
  for (double& x : f) x /= reps;
  return f;
}

double gof_pvalue(const std::array<double, 4>& freq, const DyadProbTable& t, int reps) {
  const double probs[4] = {t.p00(0, 1), t.p01(0, 1), t.p10(0, 1), t.p11(0, 1)};
  double stat = 0;
  for (int c = 0; c < 4; ++c) {
    const double expect = reps * probs[c];
    const double diff = reps * freq[c] - expect;
    stat += diff * diff / expect;
  }
  return 1.0 - chisq_cdf(stat, 3);
}

ParamVector two_node(double theta, double rho, double a0, double b0) {
  ParamVector p = ParamVector::zeros(2);
  p.theta = theta;
  p.rho = rho;
  p.alpha << a0, -a0;
  p.beta << b0, -b0;
  return p;
}

}  // namespace

TEST_CASE("dyad configurations follow the model law") {
  const int reps = 100000;
  int setting = 0;
  for (const ParamVector& p :
       {two_node(0.0, 0.0, 0.0, 0.0), two_node(-0.7, 0.9, 0.4, -0.3)}) {
    const DyadProbTable t = dyad_probs(p);
    for (bool sparse : {false, true}) {
      auto freq = dyad_freqs(p, sparse, 10000 + 500000 * setting + (sparse ? 250000 : 0), reps);
      CHECK(gof_pvalue(freq, t, reps) > 0.001);
    }
    ++setting;
  }
}

TEST_CASE("same seed same graph, different seed different graph") {
  ParamVector p = linear_design(40, 0.5, -0.5);
  CHECK(sample_graph(p, 11) == sample_graph(p, 11));
  CHECK(sample_graph_sparse(p, 11) == sample_graph_sparse(p, 11));
  CHECK(sample_graph(p, 11) != sample_graph(p, 12));
}

TEST_CASE("samples are structurally valid") {
  ParamVector p = linear_design(50, 0.3, -0.8);
  for (std::uint64_t s = 0; s < 10; ++s) {
    for (bool sparse : {false, true}) {
      Digraph g = sparse ? sample_graph_sparse(p, 77 + s) : sample_graph(p, 77 + s);
      CHECK(g.n == 50);
      for (std::size_t e = 0; e < g.edges.size(); ++e) {
        auto [a, b] = g.edges[e];
        CHECK(a != b);
        CHECK(a >= 0);
        CHECK(b >= 0);
        CHECK(a < g.n);
        CHECK(b < g.n);
        if (e > 0) CHECK(g.edges[e - 1] < g.edges[e]);  // sorted, no duplicates
      }
    }
  }
}

TEST_CASE("dense and sparse samplers agree on density") {
  const int n = 200;
  ParamVector p = linear_design(n, 0.5, -0.5);
  const DyadProbTable t = dyad_probs(p);
  double expect = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) expect += t.p01(i, j) + t.p11(i, j);
  expect /= double(n) * (n - 1);

  for (bool sparse : {false, true}) {
    double mean = 0;
    const int reps = 30;
    for (int r = 0; r < reps; ++r) {
      Digraph g = sparse ? sample_graph_sparse(p, 300 + r) : sample_graph(p, 300 + r);
      mean += tally(g).edge_density();
    }
    mean /= reps;
    CHECK(mean == doctest::Approx(expect).epsilon(0.05));
  }
}

TEST_CASE("degenerate inputs are rejected") {
  CHECK_THROWS_AS(sample_graph(ParamVector::zeros(1), 1), Error);
  ParamVector bad = ParamVector::zeros(4);
  bad.theta = std::nan("");
  CHECK_THROWS_AS(sample_graph(bad, 1), Error);
}
