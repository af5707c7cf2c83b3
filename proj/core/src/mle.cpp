#include "tdre/mle.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "tdre/estimator.hpp"

namespace tdre {

namespace {

// Observed sufficient statistics: out/in degrees, edge and mutual-dyad counts.
struct Observed {
  Vector out, in;
  double edges = 0.0, mutual = 0.0;
};

Observed observed_stats(const DyadTally& t) {
  Observed o;
  o.out = Vector::Zero(t.n);
  o.in = Vector::Zero(t.n);
  for (int i = 0; i < t.n; ++i) {
    o.out[i] = t.out_degree[i];
    o.in[i] = t.in_degree[i];
  }
  o.edges = double(t.a01.size()) + double(t.a11.size());
  o.mutual = double(t.mutual_dyads());
  return o;
}

struct State {
  double theta, rho, et, er;
  Vector alpha, beta, ea, eb;

  explicit State(const ParamVector& p)
      : theta(p.theta), rho(p.rho), alpha(p.alpha), beta(p.beta) {
    et = std::exp(theta);
    er = std::exp(rho);
    ea = alpha.array().exp();
    eb = beta.array().exp();
  }

  ParamVector params() const {
    ParamVector p;
    p.rho = rho;
    p.theta = theta;
    p.alpha = alpha;
    p.beta = beta;
    return p;
  }
};

// Scores, edge/mutual expectations and (theta, rho) Hessian in one dyad pass.
struct FullScore {
  Vector out, in;      // expected degrees
  double edges = 0.0, mutual = 0.0;
  double htt = 0.0, htr = 0.0, hrr = 0.0;  // negated curvature (positive)
  double log_k = 0.0;
};

FullScore full_score(const State& s) {
  const int n = static_cast<int>(s.alpha.size());
  FullScore f;
  f.out = Vector::Zero(n);
  f.in = Vector::Zero(n);
  for (int i = 0; i < n; ++i) {
    const double eai = s.ea[i], ebi = s.eb[i];
    for (int j = i + 1; j < n; ++j) {
      const double t10 = s.et * eai * s.eb[j];
      const double t01 = s.et * s.ea[j] * ebi;
      const double t11 = t10 * t01 * s.er;
      const double k = 1.0 + t01 + t10 + t11;
      const double p10 = t10 / k, p01 = t01 / k, p11 = t11 / k;
      const double pij = p10 + p11;  // P(X_ij = 1)
      const double pji = p01 + p11;
      f.out[i] += pij;
      f.in[j] += pij;
      f.out[j] += pji;
      f.in[i] += pji;
      const double sum = pij + pji;
      f.edges += sum;
      f.mutual += p11;
      f.htt += p10 + p01 + 4.0 * p11 - sum * sum;
      f.htr += 2.0 * p11 - sum * p11;
      f.hrr += p11 * (1.0 - p11);
      f.log_k += std::log(k);
    }
  }
  return f;
}

double residual_norm(const FullScore& f, const Observed& o) {
  double r = std::abs(f.edges - o.edges);
  r = std::max(r, std::abs(f.mutual - o.mutual));
  r = std::max(r, (f.out - o.out).cwiseAbs().maxCoeff());
  r = std::max(r, (f.in - o.in).cwiseAbs().maxCoeff());
  return r;
}

// Solve the 1-D score equation sum_j u A_j / (B_j + u A_j) = target for
// u = e^x by safeguarded Newton in x; A, B > 0 and the left side is
// increasing in u, so a bracket always pins the root.
double solve_coordinate(double x, const Vector& A, const Vector& B, double target,
                        double inner_tol) {
  double lo = -80.0, hi = 80.0;
  for (int it = 0; it < 60; ++it) {
    const double u = std::exp(x);
    double score = -target, slope = 0.0;
    for (int j = 0; j < A.size(); ++j) {
      const double p = u * A[j] / (B[j] + u * A[j]);
      score += p;
      slope += p * (1.0 - p);
    }
    if (std::abs(score) <= inner_tol) return x;
    (score > 0.0 ? hi : lo) = x;
    double next = slope > 0.0 ? x - score / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) < 1e-15 * (1.0 + std::abs(x))) return next;
    x = next;
  }
  return x;
}

ParamVector starting_point(const DyadTally& t, const MleOptions& opts) {
  if (opts.init) {
    if (opts.init->n() != t.n)
      throw Error(ErrorKind::InvalidDesign, "initial point has wrong dimension");
    return center(*opts.init);
  }
  if (opts.warm_start) {
    try {
      return estimate_all(t).params();
    } catch (const Error&) {
      // fall through to the flat start
    }
  }
  return ParamVector::zeros(t.n);
}

}  // namespace

double log_likelihood(const DyadTally& t, const ParamVector& p) {
  if (p.n() != t.n)
    throw Error(ErrorKind::InvalidDesign, "parameter dimension mismatch");
  if (t.n < 2) throw Error(ErrorKind::InvalidDesign, "need at least two nodes");
  State s(p);
  double lin = p.theta * (double(t.a01.size()) + double(t.a11.size())) +
               p.rho * double(t.mutual_dyads());
  for (int i = 0; i < t.n; ++i) {
    lin += p.alpha[i] * t.out_degree[i] + p.beta[i] * t.in_degree[i];
  }
  double log_k = 0.0;
  for (int i = 0; i < t.n; ++i) {
    for (int j = i + 1; j < t.n; ++j) {
      const double t10 = s.et * s.ea[i] * s.eb[j];
      const double t01 = s.et * s.ea[j] * s.eb[i];
      log_k += std::log(1.0 + t01 + t10 + t10 * t01 * s.er);
    }
  }
  return lin - log_k;
}

double log_likelihood(const Digraph& g, const ParamVector& p) {
  return log_likelihood(tally(g), p);
}

MleResult fit_mle(const DyadTally& t, const MleOptions& opts) {
  const int n = t.n;
  if (n < 2) throw Error(ErrorKind::InvalidDesign, "need at least two nodes");
  const Observed obs = observed_stats(t);
  State s(center(starting_point(t, opts)));

  const double inner_tol = std::min(0.1 * opts.tol, 1e-9);
  Vector A(n), B(n);
  double prev_ll = -std::numeric_limits<double>::infinity();
  int sweeps = 0;
  double grad = std::numeric_limits<double>::infinity();

  for (; sweeps < opts.max_iter; ++sweeps) {
    // out-parameters
    for (int i = 0; i < n; ++i) {
      int m = 0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const double t01 = s.et * s.ea[j] * s.eb[i];
        A[m] = s.et * s.eb[j] * (1.0 + t01 * s.er);
        B[m] = 1.0 + t01;
        ++m;
      }
      s.alpha[i] = solve_coordinate(s.alpha[i], A.head(m), B.head(m), obs.out[i],
                                    inner_tol);
      s.ea[i] = std::exp(s.alpha[i]);
    }
    // in-parameters
    for (int j = 0; j < n; ++j) {
      int m = 0;
      for (int i = 0; i < n; ++i) {
        if (i == j) continue;
        const double t01 = s.et * s.ea[j] * s.eb[i];
        A[m] = s.et * s.ea[i] * (1.0 + t01 * s.er);
        B[m] = 1.0 + t01;
        ++m;
      }
      s.beta[j] = solve_coordinate(s.beta[j], A.head(m), B.head(m), obs.in[j],
                                   inner_tol);
      s.eb[j] = std::exp(s.beta[j]);
    }
    // joint (theta, rho) Newton, then the convergence check off the same pass
    for (int inner = 0; inner < 3; ++inner) {
      const FullScore f = full_score(s);
      const double gt = obs.edges - f.edges;
      const double gr = obs.mutual - f.mutual;
      const double det = f.htt * f.hrr - f.htr * f.htr;
      double dt, dr;
      if (det > 1e-300) {
        dt = (f.hrr * gt - f.htr * gr) / det;
        dr = (f.htt * gr - f.htr * gt) / det;
      } else {
        dt = f.htt > 0.0 ? gt / f.htt : 0.0;
        dr = f.hrr > 0.0 ? gr / f.hrr : 0.0;
      }
      const double cap = std::max(std::abs(dt), std::abs(dr));
      if (cap > 2.0) {
        dt *= 2.0 / cap;
        dr *= 2.0 / cap;
      }
      s.theta += dt;
      s.rho += dr;
      s.et = std::exp(s.theta);
      s.er = std::exp(s.rho);
      if (std::max(std::abs(gt), std::abs(gr)) <= inner_tol) break;
    }

    // gauge fix: shift alpha/beta means into theta (probability-invariant)
    const double ma = s.alpha.mean(), mb = s.beta.mean();
    s.alpha.array() -= ma;
    s.beta.array() -= mb;
    s.theta += ma + mb;
    s.ea = s.alpha.array().exp();
    s.eb = s.beta.array().exp();
    s.et = std::exp(s.theta);

    const double amax =
        std::max(s.alpha.cwiseAbs().maxCoeff(), s.beta.cwiseAbs().maxCoeff());
    if (amax > opts.param_cap)
      throw Error(ErrorKind::NotConverged,
                  "degree parameter escaped past " + std::to_string(opts.param_cap) +
                      "; maximum likelihood estimate looks nonexistent");

    const FullScore f = full_score(s);
    grad = residual_norm(f, obs);
    double ll = s.theta * obs.edges + s.rho * obs.mutual + s.alpha.dot(obs.out) +
                s.beta.dot(obs.in) - f.log_k;
    if (ll + 1e-6 * (1.0 + std::abs(ll)) < prev_ll)
      throw Error(ErrorKind::Diverged, "log-likelihood decreased during ascent");
    prev_ll = ll;
    if (grad <= opts.tol) {
      MleResult r;
      r.theta_tilde = s.params();
      r.log_lik = ll;
      r.iterations = sweeps + 1;
      r.converged = true;
      r.grad_norm = grad;
      return r;
    }
  }
  throw Error(ErrorKind::NotConverged,
              "score residual " + std::to_string(grad) + " after " +
                  std::to_string(opts.max_iter) + " sweeps");
}

MleResult fit_mle(const Digraph& g, const MleOptions& opts) {
  return fit_mle(tally(g), opts);
}

}  // namespace tdre
