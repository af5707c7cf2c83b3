#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tdre/asymptotics.hpp"
#include "tdre/estimator.hpp"
#include "tdre/graph.hpp"

namespace tdre {

double normal_cdf(double z);
double normal_quantile(double q);          // inverse of normal_cdf, 1e-10
double chisq_cdf(double x, int df);        // regularized lower incomplete gamma
double regularized_gamma_p(double a, double x);

struct TestReport {
  std::string name;
  double statistic = 0.0;
  std::string null_distribution;  // "standard-normal" or "chi-square(k)"
  int df = 0;
  double p_value = 1.0;
  double level = 0.05;
  bool reject = false;
  std::optional<std::pair<double, double>> ci;
  // point estimates backing the test (for reports)
  double estimate = 0.0;
  double bias_correction = 0.0;
  double std_error = 0.0;
};

/** |rho_hat - rho_hat*| / sigma_hat_rho against z_{1-level/2}; CI included. */
TestReport test_reciprocity(const Digraph& g, double level = 0.05);

/** Bias-corrected CI for theta: theta_hat - theta_hat* +- z sigma_hat_theta. */
TestReport ci_theta(const Digraph& g, double level = 0.05);

/**
 * Equality of degree parameters. Two indices: normal z-test. k > 2: Wald
 * statistic on successive differences with tridiagonal covariance
 * (diag sigma_i^2 + sigma_{i+1}^2, off-diagonal -sigma_{i+1}^2), df = k-1.
 * kind: "alpha", "beta", or "alpha-beta" (exactly two indices, alpha_i vs
 * beta_j; the shared-node covariance enters when i == j).
 */
TestReport test_alpha_equality(const Digraph& g, const std::vector<int>& indices,
                               double level = 0.05,
                               const std::string& kind = "alpha");

/** Two-graph reciprocity comparison. */
TestReport compare_graphs(const Digraph& g1, const Digraph& g2,
                          double level = 0.05);

/** alpha_i - alpha_j +- z (sigma_i^2 + sigma_j^2)^{1/2}. */
TestReport ci_alpha_diff(const Digraph& g, int i, int j, double level = 0.05);

// same operations starting from precomputed pieces (harness fast path)
TestReport test_reciprocity_from(const EstimateReport& est,
                                 const AsymptoticTable& tab, double level);
TestReport ci_theta_from(const EstimateReport& est, const AsymptoticTable& tab,
                         double level);

}  // namespace tdre
