#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "tdre/asymptotics.hpp"
#include "tdre/estimator.hpp"
#include "tdre/inference.hpp"
#include "tdre/model.hpp"
#include "tdre/sample.hpp"
#include "tdre/tally.hpp"

using namespace tdre;

namespace {

double ks_uniform(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const double n = double(v.size());
  double d = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    d = std::max(d, (i + 1) / n - v[i]);
    d = std::max(d, v[i] - i / n);
  }
  return d;
}

// null design shared by the calibration cases: rho = 0 and alpha_1 = alpha_2
ParamVector null_design(int n) {
  ParamVector p = linear_design(n, 0.0, -0.4);
  p.alpha[1] = p.alpha[0];
  return center(p);
}

}  // namespace

TEST_CASE("normal cdf and quantile") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
  CHECK(normal_cdf(1.0) == doctest::Approx(0.841344746068543).epsilon(1e-12));
  CHECK(normal_cdf(-2.5) == doctest::Approx(0.006209665325776132).epsilon(1e-12));
  for (double z : {-3.7, -1.2, -0.1, 0.4, 2.9}) {
    CHECK(normal_cdf(z) + normal_cdf(-z) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(normal_quantile(normal_cdf(z)) == doctest::Approx(z).epsilon(1e-10));
  }
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-10));
  CHECK_THROWS_AS(normal_quantile(0.0), Error);
  CHECK_THROWS_AS(normal_quantile(1.0), Error);
}

TEST_CASE("chi-square cdf") {
  // 95% quantiles for df = 1, 3 (standard table values)
  CHECK(chisq_cdf(3.841458820694124, 1) == doctest::Approx(0.95).epsilon(1e-10));
  CHECK(chisq_cdf(7.814727903251179, 3) == doctest::Approx(0.95).epsilon(1e-10));
  CHECK(chisq_cdf(0.0, 2) == 0.0);
  CHECK(chisq_cdf(-1.0, 2) == 0.0);
  // monotone in x
  double prev = 0;
  for (double x = 0.5; x < 20; x += 0.5) {
    double c = chisq_cdf(x, 4);
    CHECK(c >= prev);
    prev = c;
  }
  CHECK_THROWS_AS(chisq_cdf(1.0, 0), Error);
}

TEST_CASE("reports keep the rejection rule and the interval consistent") {
  Digraph g = sample_graph(linear_design(200, 0.5, -0.3), 42);
  for (double level : {0.01, 0.05, 0.2}) {
    TestReport r = test_reciprocity(g, level);
    CHECK(r.reject == (r.p_value < level));
    REQUIRE(r.ci.has_value());
    CHECK(r.ci->first < r.ci->second);
    // interval center is the bias-corrected estimate
    const double mid = 0.5 * (r.ci->first + r.ci->second);
    CHECK(mid == doctest::Approx(r.estimate - r.bias_correction).epsilon(1e-10));
  }
  // interval widens monotonically as the level shrinks
  TestReport narrow = ci_theta(g, 0.2), wide = ci_theta(g, 0.01);
  CHECK(wide.ci->second - wide.ci->first > narrow.ci->second - narrow.ci->first);
}

TEST_CASE("reciprocity test is equivariant under relabeling") {
  const int n = 120;
  Digraph g = sample_graph(linear_design(n, 0.8, -0.2), 9);
  std::vector<std::pair<std::int32_t, std::int32_t>> edges;
  for (auto [s, d] : g.edges) edges.push_back({(s + 17) % n, (d + 17) % n});
  TestReport a = test_reciprocity(g);
  TestReport b = test_reciprocity(Digraph::make(n, edges));
  CHECK(a.statistic == doctest::Approx(b.statistic).epsilon(1e-12));
  CHECK(a.ci->first == doctest::Approx(b.ci->first).epsilon(1e-12));
  CHECK(a.ci->second == doctest::Approx(b.ci->second).epsilon(1e-12));
}

TEST_CASE("equality test input validation") {
  Digraph g = sample_graph(linear_design(150, 0.5, 0.0), 1);
  CHECK_THROWS_AS(test_alpha_equality(g, {3, 3}, 0.05, "alpha"), Error);
  CHECK_THROWS_AS(test_alpha_equality(g, {1}, 0.05, "alpha"), Error);
  CHECK_THROWS_AS(test_alpha_equality(g, {1, 150}, 0.05, "alpha"), Error);
  CHECK_THROWS_AS(test_alpha_equality(g, {1, 2}, 0.05, "gamma"), Error);
  CHECK_THROWS_AS(test_alpha_equality(g, {1, 2, 3}, 0.05, "alpha-beta"), Error);
  CHECK_THROWS_AS(ci_alpha_diff(g, 4, 4, 0.05), Error);

  TestReport z = test_alpha_equality(g, {0, 1}, 0.05, "alpha");
  CHECK(z.df == 0);
  CHECK(z.null_distribution == "standard-normal");
  TestReport w = test_alpha_equality(g, {0, 1, 2, 3}, 0.05, "beta");
  CHECK(w.df == 3);
  CHECK(w.null_distribution == "chi-square(3)");
  TestReport ab = test_alpha_equality(g, {2, 2}, 0.05, "alpha-beta");
  CHECK(ab.name == "alpha-beta-equality");
}

TEST_CASE("four-parameter Wald statistic equals the explicit quadratic form") {
  Digraph g = sample_graph(linear_design(120, 0.5, -0.2), 33);
  const std::vector<int> idx{2, 17, 40, 99};
  TestReport w = test_alpha_equality(g, idx, 0.05, "alpha");

  AsymptoticTable tab = plug_in(estimate_all(tally(g)));
  EstimateReport est = estimate_all(tally(g));
  Eigen::Vector3d d;
  Eigen::Matrix3d V = Eigen::Matrix3d::Zero();
  for (int m = 0; m < 3; ++m) {
    d[m] = est.alpha_hat[idx[m]] - est.alpha_hat[idx[m + 1]];
    V(m, m) = tab.sigma_alpha2[idx[m]] + tab.sigma_alpha2[idx[m + 1]];
    if (m > 0) {
      V(m, m - 1) = -tab.sigma_alpha2[idx[m]];
      V(m - 1, m) = -tab.sigma_alpha2[idx[m]];
    }
  }
  const double via_solve = d.dot(V.ldlt().solve(d));
  const double via_inverse = d.dot(V.inverse() * d);
  CHECK(via_solve == doctest::Approx(via_inverse).epsilon(1e-10));
  CHECK(w.statistic == doctest::Approx(via_inverse).epsilon(1e-10));
  CHECK(w.p_value == doctest::Approx(1.0 - chisq_cdf(via_inverse, 3)).epsilon(1e-10));
}

TEST_CASE("comparison statistic is antisymmetric and vanishes on identical graphs") {
  Digraph g1 = sample_graph(linear_design(100, 0.6, -0.2), 2);
  Digraph g2 = sample_graph(linear_design(100, 0.1, -0.2), 3);
  TestReport ab = compare_graphs(g1, g2);
  TestReport ba = compare_graphs(g2, g1);
  CHECK(ab.statistic == doctest::Approx(-ba.statistic).epsilon(1e-14));
  CHECK(ab.p_value == doctest::Approx(ba.p_value).epsilon(1e-12));

  TestReport same = compare_graphs(g1, g1);
  CHECK(same.statistic == 0.0);
  CHECK_FALSE(same.reject);
}

TEST_CASE("null calibration pool at n=300") {
  // one pool of 500 null replications drives the size, coverage and
  // p-value-uniformity checks; a second independent pool feeds compare
  const int n = 300, R = 500;
  ParamVector p = null_design(n);
  const double a05_true = p.alpha[0] - p.alpha[5];

  int rej_rec = 0, rej_eq = 0, rej_cmp = 0, cov_th = 0, cov_ad = 0, ok = 0, okp = 0;
  std::vector<double> pv_rec, pv_eq;
  for (int r = 0; r < R; ++r) {
    Digraph gA = sample_graph(p, 1000 + r);
    try {
      EstimateReport est = estimate_all(tally(gA));
      AsymptoticTable tab = plug_in(est);

      TestReport rec = test_reciprocity_from(est, tab, 0.05);
      rej_rec += rec.reject;
      pv_rec.push_back(rec.p_value);

      TestReport tci = ci_theta_from(est, tab, 0.05);
      cov_th += (tci.ci->first <= p.theta && p.theta <= tci.ci->second);

      TestReport eq = test_alpha_equality(gA, {0, 1}, 0.05, "alpha");
      rej_eq += eq.reject;
      pv_eq.push_back(eq.p_value);

      TestReport ad = ci_alpha_diff(gA, 0, 5, 0.05);
      cov_ad += (ad.ci->first <= a05_true && a05_true <= ad.ci->second);
      ++ok;

      TestReport cmp = compare_graphs(gA, sample_graph(p, 50000 + r), 0.05);
      rej_cmp += cmp.reject;
      ++okp;
    } catch (const Error&) {
    }
  }
  REQUIRE(ok >= 490);

  const double size_rec = double(rej_rec) / ok;
  const double size_eq = double(rej_eq) / ok;
  const double size_cmp = double(rej_cmp) / okp;
  CHECK(size_rec >= 0.03);
  CHECK(size_rec <= 0.08);
  CHECK(size_eq >= 0.03);
  CHECK(size_eq <= 0.08);
  CHECK(size_cmp >= 0.03);
  CHECK(size_cmp <= 0.08);

  CHECK(double(cov_th) / ok >= 0.91);
  CHECK(double(cov_th) / ok <= 0.98);
  CHECK(double(cov_ad) / ok >= 0.91);
  CHECK(double(cov_ad) / ok <= 0.98);

  // null p-values close to Uniform(0,1): KS below the 1% critical value
  const double crit = 1.6276 / std::sqrt(double(pv_rec.size()));
  CHECK(ks_uniform(pv_rec) < crit);
  CHECK(ks_uniform(pv_eq) < crit);
}

TEST_CASE("power at the alternative") {
  const int n = 500;
  ParamVector p1 = linear_design(n, 0.5, 0.0);
  ParamVector p0 = linear_design(n, 0.0, 0.0);
  int rej = 0, rej_cmp = 0;
  const int R = 100;
  for (int r = 0; r < R; ++r) {
    Digraph g1 = sample_graph(p1, 200 + r);
    rej += test_reciprocity(g1, 0.05).reject;
    rej_cmp += compare_graphs(g1, sample_graph(p0, 90000 + r), 0.05).reject;
  }
  CHECK(rej >= 90);
  CHECK(rej_cmp >= 90);
}
