#include "tdre/inference.hpp"

#include <cmath>

#include "tdre/tally.hpp"

namespace tdre {

double normal_cdf(double z) { return 0.5 * std::erfc(-z * M_SQRT1_2); }

double normal_quantile(double q) {
  if (!(q > 0.0 && q < 1.0))
    throw Error(ErrorKind::InvalidDesign, "quantile needs q in (0,1)");
  // bisection on a bracket where normal_cdf is numerically exact, then Newton
  double lo = -14.0, hi = 14.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (normal_cdf(mid) < q ? lo : hi) = mid;
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 4; ++it) {
    const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
    if (pdf <= 0.0) break;
    x -= (normal_cdf(x) - q) / pdf;
  }
  return x;
}

double regularized_gamma_p(double a, double x) {
  if (x < 0.0 || a <= 0.0)
    throw Error(ErrorKind::InvalidDesign, "regularized gamma needs a > 0, x >= 0");
  if (x == 0.0) return 0.0;
  const double lg = std::lgamma(a);
  if (x < a + 1.0) {
    // lower series
    double term = 1.0 / a, sum = term, ap = a;
    for (int k = 0; k < 2000; ++k) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - lg);
  }
  // upper continued fraction (Lentz)
  const double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int k = 1; k <= 2000; ++k) {
    const double an = -double(k) * (double(k) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  const double q = std::exp(-x + a * std::log(x) - lg) * h;
  return 1.0 - q;
}

double chisq_cdf(double x, int df) {
  if (df < 1) throw Error(ErrorKind::InvalidDesign, "chi-square needs df >= 1");
  if (x <= 0.0) return 0.0;
  return regularized_gamma_p(0.5 * df, 0.5 * x);
}

namespace {

std::pair<EstimateReport, AsymptoticTable> fit_and_plug(const Digraph& g) {
  const EstimateReport est = estimate_all(tally(g));
  return {est, plug_in(est)};
}

TestReport normal_report(std::string name, double diff, double bias, double se,
                         double level, double point) {
  TestReport r;
  r.name = std::move(name);
  r.null_distribution = "standard-normal";
  r.level = level;
  r.estimate = point;
  r.bias_correction = bias;
  r.std_error = se;
  r.statistic = std::abs(diff) / se;
  r.p_value = 2.0 * (1.0 - normal_cdf(r.statistic));
  r.reject = r.p_value < level;
  const double z = normal_quantile(1.0 - level / 2.0);
  r.ci = std::make_pair(diff - z * se, diff + z * se);
  return r;
}

}  // namespace

TestReport test_reciprocity_from(const EstimateReport& est, const AsymptoticTable& tab,
                                 double level) {
  const double se = std::sqrt(tab.sigma_rho2);
  return normal_report("reciprocity", est.rho_hat - tab.rho_star, tab.rho_star, se,
                       level, est.rho_hat);
}

TestReport ci_theta_from(const EstimateReport& est, const AsymptoticTable& tab,
                         double level) {
  const double se = std::sqrt(tab.sigma_theta2);
  TestReport r = normal_report("theta-ci", est.theta_hat - tab.theta_star,
                               tab.theta_star, se, level, est.theta_hat);
  return r;
}

TestReport test_reciprocity(const Digraph& g, double level) {
  auto [est, tab] = fit_and_plug(g);
  return test_reciprocity_from(est, tab, level);
}

TestReport ci_theta(const Digraph& g, double level) {
  auto [est, tab] = fit_and_plug(g);
  return ci_theta_from(est, tab, level);
}

TestReport test_alpha_equality(const Digraph& g, const std::vector<int>& indices,
                               double level, const std::string& kind) {
  if (kind != "alpha" && kind != "beta" && kind != "alpha-beta")
    throw Error(ErrorKind::InvalidIndices, "kind must be alpha, beta or alpha-beta");
  const int k = static_cast<int>(indices.size());
  if (k < 2) throw Error(ErrorKind::InvalidIndices, "need at least two indices");
  for (int v : indices)
    if (v < 0 || v >= g.n)
      throw Error(ErrorKind::InvalidIndices, "index " + std::to_string(v) +
                                                 " outside [0," + std::to_string(g.n) + ")");
  if (kind != "alpha-beta") {
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b)
        if (indices[a] == indices[b])
          throw Error(ErrorKind::InvalidIndices,
                      "repeated index " + std::to_string(indices[a]));
  } else if (k != 2) {
    throw Error(ErrorKind::InvalidIndices, "alpha-beta comparison takes exactly two indices");
  }

  auto [est, tab] = fit_and_plug(g);
  const Vector& hat = kind == "beta" ? est.beta_hat : est.alpha_hat;
  const Vector& var = kind == "beta" ? tab.sigma_beta2 : tab.sigma_alpha2;

  if (kind == "alpha-beta") {
    const int i = indices[0], j = indices[1];
    const double diff = est.alpha_hat[i] - est.beta_hat[j];
    double v = tab.sigma_alpha2[i] + tab.sigma_beta2[j];
    if (i == j) v -= 2.0 * tab.sigma_cross[i];
    if (!(v > 0.0)) throw Error(ErrorKind::SingularCovariance, "nonpositive variance");
    TestReport r = normal_report("alpha-beta-equality", diff, 0.0, std::sqrt(v), level, diff);
    return r;
  }

  if (k == 2) {
    const double diff = hat[indices[0]] - hat[indices[1]];
    const double v = var[indices[0]] + var[indices[1]];
    if (!(v > 0.0)) throw Error(ErrorKind::SingularCovariance, "nonpositive variance");
    return normal_report(kind + "-equality", diff, 0.0, std::sqrt(v), level, diff);
  }

  // successive differences with tridiagonal covariance
  Vector d(k - 1);
  Matrix V = Matrix::Zero(k - 1, k - 1);
  for (int m = 0; m + 1 < k; ++m) {
    d[m] = hat[indices[m]] - hat[indices[m + 1]];
    V(m, m) = var[indices[m]] + var[indices[m + 1]];
    if (m + 2 < k) {
      V(m, m + 1) = -var[indices[m + 1]];
      V(m + 1, m) = -var[indices[m + 1]];
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(V);
  const double lmin = es.eigenvalues().minCoeff();
  const double lmax = es.eigenvalues().maxCoeff();
  if (!(lmin > 0.0) || lmax / lmin > 1e12)
    throw Error(ErrorKind::SingularCovariance,
                "difference covariance is numerically singular");
  const double w = d.dot(V.ldlt().solve(d));

  TestReport r;
  r.name = kind + "-equality";
  r.null_distribution = "chi-square(" + std::to_string(k - 1) + ")";
  r.df = k - 1;
  r.level = level;
  r.statistic = w;
  r.p_value = 1.0 - chisq_cdf(w, k - 1);
  r.reject = r.p_value < level;
  return r;
}

TestReport compare_graphs(const Digraph& g1, const Digraph& g2, double level) {
  auto [e1, t1] = fit_and_plug(g1);
  auto [e2, t2] = fit_and_plug(g2);
  const double num = (e1.rho_hat - t1.rho_star) - (e2.rho_hat - t2.rho_star);
  const double se = std::sqrt(t1.sigma_rho2 + t2.sigma_rho2);
  TestReport r = normal_report("compare-reciprocity", num, t1.rho_star - t2.rho_star,
                               se, level, e1.rho_hat - e2.rho_hat);
  r.statistic = num / se;  // signed: antisymmetric in (g1, g2)
  r.p_value = 2.0 * (1.0 - normal_cdf(std::abs(r.statistic)));
  r.reject = r.p_value < level;
  return r;
}

TestReport ci_alpha_diff(const Digraph& g, int i, int j, double level) {
  if (i == j) throw Error(ErrorKind::InvalidIndices, "alpha difference needs i != j");
  if (i < 0 || j < 0 || i >= g.n || j >= g.n)
    throw Error(ErrorKind::InvalidIndices, "index outside [0,n)");
  auto [est, tab] = fit_and_plug(g);
  const double diff = est.alpha_hat[i] - est.alpha_hat[j];
  const double se = std::sqrt(tab.sigma_alpha2[i] + tab.sigma_alpha2[j]);
  return normal_report("alpha-diff-ci", diff, 0.0, se, level, diff);
}

}  // namespace tdre
