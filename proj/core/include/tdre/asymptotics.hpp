#pragma once

#include <array>
#include <string>

#include "tdre/estimator.hpp"
#include "tdre/model.hpp"

namespace tdre {

/**
 * Variance/bias table: entries of the limiting covariance and the O(1/n)
 * bias shifts, evaluated at a probability table (true or plugged-in).
 */
struct AsymptoticTable {
  int n = 0;
  double sigma_theta2 = 0.0;
  double sigma_rho2 = 0.0;
  Vector sigma_alpha2, sigma_beta2;
  Vector sigma_cross;  // per-node alpha/beta cross covariance
  double theta_star = 0.0;
  double rho_star = 0.0;
  // density diagnostics: max / min over off-diagonal p01 entries
  double c_upper = 0.0, c_lower = 0.0;
  std::string source;  // "true" or "plugin"
};

/**
 * g_m(x; y) = sum_k x_k^2 y_k - (sum_k x_k y_k)^2, the variance of a
 * discrete variable taking value x_k with probability y_k (plus none).
 */
double g_m(const double* x, const double* y, int m);

/** Accelerated O(n^3) evaluation (matrix products + partial-sum corrections). */
AsymptoticTable variance_table(const DyadProbTable& p);

/** theta*, rho* only (subset of variance_table, same acceleration). */
std::pair<double, double> bias_terms(const DyadProbTable& p);

/**
 * Independent naive-loop implementation of every formula, quartic loops and
 * all; the transcription oracle. Guarded to n <= 64.
 */
AsymptoticTable variance_table_naive(const DyadProbTable& p);

/** Table at probabilities built from estimated parameters. */
AsymptoticTable plug_in(const EstimateReport& est);

/**
 * Intermediate quantities for one (a,b,c) tuple, exposed for the
 * transcription-defense tests. Index convention: [i][t] entries, i != t.
 */
struct AbcTables {
  Vector mu_t;        // mu_t^{(abc)}
  Matrix mu_it;       // mu_{it}^{(abc)}
  Matrix eta, zeta1, zeta2;
};

// abc in {100, 010, 101, 011} encoded as (a<<2)|(b<<1)|c
AbcTables abc_tables(const DyadProbTable& p, int abc);
AbcTables abc_tables_naive(const DyadProbTable& p, int abc);

// kappa^{(1)}, kappa^{(2)}, xi^{(1)}, xi^{(2)} matrices ([i][k] / [j][l])
struct KappaXi {
  Matrix kappa1, kappa2, xi1, xi2;
};
KappaXi kappa_xi(const DyadProbTable& p);
KappaXi kappa_xi_naive(const DyadProbTable& p);

}  // namespace tdre
