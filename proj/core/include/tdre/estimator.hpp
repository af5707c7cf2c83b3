#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tdre/model.hpp"
#include "tdre/tally.hpp"

namespace tdre {

enum class CountMethod { Auto, Dense, Sparse, BruteForce };

/**
 * Triple-dyad counts. B1 = A01 A00 A01, B2 = A00 A01 A00,
 * B3 = A11 A10 A11, B4 = A01 A11 A01. Diagonals are always populated;
 * full B1/B2 are needed for alpha/beta and are skipped in diag-only mode.
 * All values are exact integers (stored as doubles).
 */
struct TripleCounts {
  int n = 0;
  Vector b1d, b2d, b3d, b4d;  // diagonals
  Matrix B1, B2;              // empty in diag-only mode
  Matrix B3, B4;              // only populated on request (oracle checks)
  bool full = false;
  std::string method;

  bool has_full() const { return full; }
};

struct CountOptions {
  CountMethod method = CountMethod::Auto;
  bool diag_only = false;  // theta/rho only
  bool full_b34 = false;   // materialize B3/B4 off-diagonals too
};

TripleCounts triple_counts(const DyadTally& t, const CountOptions& opts = {});

/** Estimates plus audit trail. */
struct EstimateReport {
  int n = 0;
  double theta_hat = 0.0;
  double rho_hat = 0.0;
  Vector alpha_hat, beta_hat;  // empty in global-only mode
  // per-node audit terms: theta_terms[t] = log(B1_tt/B2_tt),
  // rho_terms[t] = log(B3_tt/B4_tt); alpha_terms = alpha_hat + theta_hat,
  // beta_terms likewise (raw averages before the theta subtraction)
  Vector theta_terms, rho_terms, alpha_terms, beta_terms;
  std::vector<int> skipped_nodes;  // outside the filter set (filtered runs)
  std::string method;
  bool global_only = false;

  ParamVector params() const;
};

struct EstimateOptions {
  CountMethod method = CountMethod::Auto;
  bool global_only = false;
};

/** theta_hat = (1/n) sum_t log(B1_tt / B2_tt). DegenerateCounts on zeros. */
double estimate_theta(const TripleCounts& c);
/** rho_hat = (1/n) sum_t log(B3_tt / B4_tt) - theta_hat. */
double estimate_rho(const TripleCounts& c, double theta_hat);
/** alpha_i = (1/n) sum_t log(B1[t][i] / B2[i][t]) - theta_hat. */
Vector estimate_alpha(const TripleCounts& c, double theta_hat);
/** beta_j = (1/n) sum_t log(B1[j][t] / B2[t][j]) - theta_hat. */
Vector estimate_beta(const TripleCounts& c, double theta_hat);

EstimateReport estimate_all(const DyadTally& t, const EstimateOptions& opts = {});

/**
 * Nodes with out-degree >= min_out, in-degree >= min_in and strictly
 * positive diagonal counts B1..B4[t][t].
 */
std::vector<int> gamma_filter(const DyadTally& t, int min_out, int min_in);

/** Averages restricted to t in gamma; alpha/beta reported for i in gamma. */
EstimateReport estimate_all_filtered(const DyadTally& t,
                                     const std::vector<int>& gamma,
                                     const EstimateOptions& opts = {});
double estimate_theta_filtered(const TripleCounts& c,
                               const std::vector<int>& gamma);

}  // namespace tdre
