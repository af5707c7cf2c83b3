#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "tdre/model.hpp"
#include "tdre/rng.hpp"

using namespace tdre;

namespace {

ParamVector random_params(int n, double bound, std::uint64_t seed) {
  SequentialRng r{CounterRng(seed)};
  ParamVector p;
  p.rho = (2 * r.uniform() - 1) * bound;
  p.theta = (2 * r.uniform() - 1) * bound;
  p.alpha.resize(n);
  p.beta.resize(n);
  for (int i = 0; i < n; ++i) {
    p.alpha[i] = (2 * r.uniform() - 1) * bound;
    p.beta[i] = (2 * r.uniform() - 1) * bound;
  }
  return center(p);
}

}  // namespace

TEST_CASE("dyad probabilities sum to one for every pair") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    ParamVector p = random_params(8, 3.0, 100 + s);
    DyadProbTable t = dyad_probs(p);
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) {
        if (i == j) continue;
        const double sum = t.p00(i, j) + t.p01(i, j) + t.p10(i, j) + t.p11(i, j);
        CHECK(std::abs(sum - 1.0) < 1e-12);
      }
  }
}

TEST_CASE("dyad table symmetry relations") {
  ParamVector p = random_params(10, 2.0, 7);
  DyadProbTable t = dyad_probs(p);
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      if (i == j) continue;
      CHECK(t.p00(i, j) == doctest::Approx(t.p00(j, i)).epsilon(1e-14));
      CHECK(t.p11(i, j) == doctest::Approx(t.p11(j, i)).epsilon(1e-14));
      CHECK(t.p01(i, j) == doctest::Approx(t.p10(j, i)).epsilon(1e-14));
    }
}

TEST_CASE("mutual-dyad probability closed form") {
  // theta=1, rho=0.5, alpha=beta=0:
  // p11 = e^{2 theta + rho} / (1 + 2 e^theta + e^{2 theta + rho}) = 0.654304...
  ParamVector p = ParamVector::zeros(4);
  p.theta = 1.0;
  p.rho = 0.5;
  DyadProbTable t = dyad_probs(p);
  const double k = 1.0 + 2.0 * std::exp(1.0) + std::exp(2.5);
  CHECK(t.p11(0, 1) == doctest::Approx(std::exp(2.5) / k).epsilon(1e-12));
  CHECK(t.p11(2, 3) == doctest::Approx(0.6543038).epsilon(1e-6));
}

TEST_CASE("probabilities survive extreme parameters") {
  ParamVector p = ParamVector::zeros(3);
  p.theta = 600.0;  // naive exp overflows; stabilized form must not
  DyadProbTable t = dyad_probs(p);
  CHECK(std::isfinite(t.p11(0, 1)));
  CHECK(t.p11(0, 1) == doctest::Approx(1.0));
  p.theta = -600.0;
  t = dyad_probs(p);
  CHECK(t.p00(0, 1) == doctest::Approx(1.0));
}

TEST_CASE("center shifts means into theta") {
  ParamVector p = ParamVector::zeros(2);
  p.alpha << 1.0, 1.0;
  ParamVector c = center(p);
  CHECK(c.alpha[0] == doctest::Approx(0.0));
  CHECK(c.alpha[1] == doctest::Approx(0.0));
  CHECK(c.theta == doctest::Approx(1.0));
  CHECK(c.rho == p.rho);
  CHECK(c.is_centered());
}

TEST_CASE("center is idempotent and already-centered input is unchanged") {
  ParamVector p = random_params(8, 2.0, 42);
  ParamVector c = center(p);
  CHECK(c.theta == doctest::Approx(p.theta).epsilon(1e-15));
  // re-centering shifts by the residual mean (~1e-17); idempotent up to rounding
  ParamVector cc = center(c);
  CHECK(std::abs(cc.theta - c.theta) < 1e-15);
  for (int i = 0; i < 8; ++i) CHECK(std::abs(cc.alpha[i] - c.alpha[i]) < 1e-15);
}

TEST_CASE("center leaves the dyad law invariant") {
  SequentialRng r(CounterRng(5));
  ParamVector p;
  p.rho = 0.3;
  p.theta = -0.2;
  p.alpha.resize(8);
  p.beta.resize(8);
  for (int i = 0; i < 8; ++i) {
    p.alpha[i] = 2 * r.uniform() - 1;
    p.beta[i] = 2 * r.uniform() - 1;
  }
  DyadProbTable before = dyad_probs(p);
  DyadProbTable after = dyad_probs(center(p));
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      if (i == j) continue;
      CHECK(std::abs(before.p00(i, j) - after.p00(i, j)) < 1e-12);
      CHECK(std::abs(before.p01(i, j) - after.p01(i, j)) < 1e-12);
      CHECK(std::abs(before.p10(i, j) - after.p10(i, j)) < 1e-12);
      CHECK(std::abs(before.p11(i, j) - after.p11(i, j)) < 1e-12);
    }
}

TEST_CASE("piecewise-linear design matches its definition") {
  const int n = 10;
  ParamVector p = linear_design(n, 0.5, -0.3);
  CHECK(p.rho == 0.5);
  CHECK(p.is_centered());
  // raw values i/(n/2) for i=1..n/2 and -(i-n/2)/(n/2) after, shifted by a
  // common constant so they sum to zero
  Vector raw(n);
  for (int i = 1; i <= n; ++i)
    raw[i - 1] = i <= n / 2 ? double(i) / (n / 2) : -double(i - n / 2) / (n / 2);
  const double mean = raw.mean();
  for (int i = 0; i < n; ++i) {
    CHECK(p.alpha[i] == doctest::Approx(raw[i] - mean).epsilon(1e-14));
    CHECK(p.beta[i] == doctest::Approx(raw[i] - mean).epsilon(1e-14));
  }
  CHECK(p.theta == doctest::Approx(-0.3 + 2 * mean).epsilon(1e-14));
}

TEST_CASE("log-ratio identities behind the estimators") {
  // log[(p01_it p00_ij p01_tj)/(p00_it p01_ij p00_tj)] = theta + alpha_t + beta_t
  // log[(p11_it p10_ij p11_tj)/(p10_it p11_ij p10_tj)] = rho + theta + alpha_t + beta_t
  const int n = 12;
  SequentialRng pick(CounterRng(2026));
  int checked = 0;
  for (std::uint64_t s = 0; checked < 1000; ++s) {
    ParamVector p = random_params(n, 2.0, 10000 + s);
    DyadProbTable t = dyad_probs(p);
    for (int rep = 0; rep < 25; ++rep, ++checked) {
      int i = int(pick.uniform() * n), j, k;
      do j = int(pick.uniform() * n); while (j == i);
      do k = int(pick.uniform() * n); while (k == i || k == j);
      const double lhs1 = std::log(t.p01(i, k) * t.p00(i, j) * t.p01(k, j)) -
                          std::log(t.p00(i, k) * t.p01(i, j) * t.p00(k, j));
      CHECK(lhs1 == doctest::Approx(p.theta + p.alpha[k] + p.beta[k]).epsilon(1e-10));
      const double lhs2 = std::log(t.p11(i, k) * t.p10(i, j) * t.p11(k, j)) -
                          std::log(t.p10(i, k) * t.p11(i, j) * t.p10(k, j));
      CHECK(lhs2 ==
            doctest::Approx(p.rho + p.theta + p.alpha[k] + p.beta[k]).epsilon(1e-10));
    }
  }
  CHECK(checked >= 1000);
}

TEST_CASE("design rejects tiny n") {
  CHECK_THROWS_AS(linear_design(1, 0.0, 0.0), Error);
}
