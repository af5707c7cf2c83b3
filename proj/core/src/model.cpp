#include "tdre/model.hpp"

#include <cmath>

namespace tdre {

bool ParamVector::is_finite() const {
  if (!std::isfinite(rho) || !std::isfinite(theta)) return false;
  return alpha.allFinite() && beta.allFinite();
}

bool ParamVector::is_centered() const {
  const double tol = 1e-9 * std::max(1, n());
  return std::abs(alpha.sum()) <= tol && std::abs(beta.sum()) <= tol;
}

ParamVector center(const ParamVector& p) {
  ParamVector out = p;
  const double am = p.alpha.mean();
  const double bm = p.beta.mean();
  out.alpha.array() -= am;
  out.beta.array() -= bm;
  out.theta += am + bm;
  return out;
}

ParamVector linear_design(int n, double rho, double theta) {
  if (n < 2 || n % 2 != 0)
    throw Error(ErrorKind::InvalidDesign,
                "linear design requires even n >= 2, got " + std::to_string(n));
  ParamVector p = ParamVector::zeros(n);
  p.rho = rho;
  p.theta = theta;
  const int h = n / 2;
  for (int i = 1; i <= n; ++i) {
    const double v = i <= h ? double(i) / h : -double(i - h) / h;
    p.alpha[i - 1] = v;
  }
  p.beta = p.alpha;
  return center(p);
}

DyadProbTable dyad_probs(const ParamVector& p) {
  const int n = p.n();
  DyadProbTable t;
  t.n = n;
  t.p00 = Matrix::Zero(n, n);
  t.p01 = Matrix::Zero(n, n);
  t.p10 = Matrix::Zero(n, n);
  t.p11 = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double w10 = p.theta + p.alpha[i] + p.beta[j];
      const double w01 = p.theta + p.alpha[j] + p.beta[i];
      const double w11 = w10 + w01 + p.rho;
      const double m = std::max({0.0, w01, w10, w11});
      const double e00 = std::exp(-m);
      const double e01 = std::exp(w01 - m);
      const double e10 = std::exp(w10 - m);
      const double e11 = std::exp(w11 - m);
      const double k = e00 + e01 + e10 + e11;
      t.p00(i, j) = e00 / k;
      t.p01(i, j) = e01 / k;
      t.p10(i, j) = e10 / k;
      t.p11(i, j) = e11 / k;
      // p_ji^{ab} = p_ij^{ba}
      t.p00(j, i) = t.p00(i, j);
      t.p11(j, i) = t.p11(i, j);
      t.p01(j, i) = t.p10(i, j);
      t.p10(j, i) = t.p01(i, j);
    }
  }
  return t;
}

}  // namespace tdre
