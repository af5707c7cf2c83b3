#pragma once

#include <Eigen/Dense>

#include "tdre/error.hpp"

namespace tdre {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/** Parameter vector (rho, theta, alpha_1..n, beta_1..n). */
struct ParamVector {
  double rho = 0.0;
  double theta = 0.0;
  Vector alpha;
  Vector beta;

  int n() const { return static_cast<int>(alpha.size()); }

  static ParamVector zeros(int n) {
    ParamVector p;
    p.alpha = Vector::Zero(n);
    p.beta = Vector::Zero(n);
    return p;
  }

  bool is_finite() const;
  // |sum alpha|, |sum beta| <= 1e-9 * n
  bool is_centered() const;
};

/**
 * Shift to the zero-sum identification: alpha -= mean, beta -= mean,
 * theta += both means. Dyad probabilities are invariant.
 */
ParamVector center(const ParamVector& p);

/**
 * Piecewise-linear simulation design: alpha_i = beta_i = i/(n/2) for the
 * first half, -(i - n/2)/(n/2) for the second (1-based), then centered.
 */
ParamVector linear_design(int n, double rho, double theta);

/** Per-dyad configuration probabilities; zero diagonals. */
struct DyadProbTable {
  int n = 0;
  Matrix p00, p01, p10, p11;

  const Matrix& state(int a, int b) const {
    if (a == 0) return b == 0 ? p00 : p01;
    return b == 0 ? p10 : p11;
  }
};

/**
 * p_ij^{ab} = exp{a(theta+alpha_i+beta_j) + b(theta+alpha_j+beta_i) + ab rho} / k_ij,
 * evaluated with per-dyad max-exponent subtraction.
 */
DyadProbTable dyad_probs(const ParamVector& p);

}  // namespace tdre
