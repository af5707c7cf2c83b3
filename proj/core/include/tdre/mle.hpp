#pragma once

#include "tdre/graph.hpp"
#include "tdre/model.hpp"
#include "tdre/tally.hpp"

namespace tdre {

struct MleResult {
  ParamVector theta_tilde;
  double log_lik = 0.0;
  int iterations = 0;
  bool converged = false;
  double grad_norm = 0.0;  // max score-equation residual at exit
};

/** Dyad-factorized log likelihood: sum_{i<j} log p_{ij}^{D_ij}(theta_vec). */
double log_likelihood(const Digraph& g, const ParamVector& p);
double log_likelihood(const DyadTally& t, const ParamVector& p);

struct MleOptions {
  double tol = 1e-8;      // max residual of the 2n+2 score equations
  int max_iter = 400;     // coordinate sweeps
  // start from the ratio estimator when it is defined (else zeros)
  bool warm_start = true;
  // |alpha_i|, |beta_j| beyond this indicate MLE nonexistence
  double param_cap = 30.0;
  const ParamVector* init = nullptr;  // explicit start overrides warm_start
};

/**
 * Cyclic coordinate ascent: each alpha_i / beta_j solved by a safeguarded
 * 1-D Newton on its score equation, (theta, rho) by joint 2-D Newton;
 * gauge fixed by centering every sweep. Throws NotConverged / Diverged.
 */
MleResult fit_mle(const Digraph& g, const MleOptions& opts = {});
MleResult fit_mle(const DyadTally& t, const MleOptions& opts = {});

}  // namespace tdre
