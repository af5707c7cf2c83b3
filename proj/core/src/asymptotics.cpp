#include "tdre/asymptotics.hpp"

#include <cmath>

namespace tdre {

namespace {

// abc encoded (a<<2)|(b<<1)|c; x = P^{ca}, y = P^{cb}
const Matrix& pick_x(const DyadProbTable& p, int abc) {
  return p.state(abc & 1, (abc >> 2) & 1);
}
const Matrix& pick_y(const DyadProbTable& p, int abc) {
  return p.state(abc & 1, (abc >> 1) & 1);
}
int swap_ab(int abc) {
  return ((abc & 1)) | (((abc >> 2) & 1) << 1) | (((abc >> 1) & 1) << 2);
}

struct Kahan {
  double s = 0.0, c = 0.0;
  void add(double v) {
    const double y = v - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
};

void require_positive(const Vector& mu, const char* what) {
  for (int t = 0; t < mu.size(); ++t)
    if (!(mu[t] > 0.0))
      throw Error(ErrorKind::ZeroMu, std::string(what) + " nonpositive at node " +
                                         std::to_string(t), t);
}

struct MuPair {
  Vector mu_t;
  Matrix mu_it;
};

MuPair mu_pair(const DyadProbTable& p, int abc) {
  const int n = p.n;
  const double n2 = double(n) * n;
  const Matrix& Px = pick_x(p, abc);
  const Matrix& Py = pick_y(p, abc);
  Matrix S1 = Py * Px.transpose();
  Matrix G = Px.transpose() * S1;
  MuPair m;
  m.mu_t = G.diagonal() / n2;
  Vector w = Px.cwiseProduct(Py).rowwise().sum();
  Vector z = Px.cwiseProduct(Py).colwise().sum().transpose();
  Matrix PxT = Px.transpose();
  m.mu_it = (G.array() - PxT.array().rowwise() * w.transpose().array() -
             PxT.array().colwise() * z.array() +
             PxT.array().square() * Py.transpose().array()) /
            n2;
  m.mu_it.diagonal().setZero();
  return m;
}

KappaXi kappa_xi_core(const DyadProbTable& p, const Matrix& MU100, const Matrix& MU010) {
  const int n = p.n;
  const double n2 = double(n) * n;
  for (int i = 0; i < n; ++i)
    for (int t = 0; t < n; ++t)
      if (i != t && !(MU100(i, t) > 0.0 && MU010(i, t) > 0.0))
        throw Error(ErrorKind::ZeroMu,
                    "pairwise mu nonpositive at (" + std::to_string(i) + "," +
                        std::to_string(t) + ")");

  Matrix R1 = MU100.cwiseInverse();
  Matrix R2 = MU010.cwiseInverse();
  R1.diagonal().setZero();
  R2.diagonal().setZero();

  KappaXi k;
  {
    Matrix W1 = p.p01 * p.p00;
    Vector v1(n);
    for (int i = 0; i < n; ++i) v1[i] = R1.row(i).dot(p.p01.col(i));
    Matrix P00T = p.p00.transpose();
    Matrix P01T = p.p01.transpose();
    k.kappa1 = ((R1 * W1).array() - R1.array().rowwise() * W1.diagonal().transpose().array() -
                P00T.array().colwise() * v1.array() + P00T.array() * R1.array() * P01T.array()) /
               n2;

    Matrix W2 = p.p00 * p.p01.transpose();
    Vector v2(n);
    for (int i = 0; i < n; ++i) v2[i] = R2.row(i).dot(p.p00.col(i));
    k.kappa2 = ((R2 * W2).array() - R2.array().rowwise() * W2.diagonal().transpose().array() -
                P01T.array().colwise() * v2.array() + P01T.array() * R2.array() * P00T.array()) /
               n2;
  }
  {
    Matrix M1 = R1.transpose();
    Matrix M2 = R2.transpose();
    Matrix V1 = p.p10 * p.p00;
    Matrix V2 = p.p00 * p.p01;
    Vector u1 = M1.cwiseProduct(p.p01).rowwise().sum();
    Vector u2 = M2.cwiseProduct(p.p00).rowwise().sum();
    k.xi1 = ((M1 * V1).array() - M1.array().rowwise() * V1.diagonal().transpose().array() -
             p.p00.array().colwise() * u1.array() + p.p00.array() * M1.array() * p.p01.array()) /
            n2;
    k.xi2 = ((M2 * V2).array() - M2.array().rowwise() * V2.diagonal().transpose().array() -
             p.p01.array().colwise() * u2.array() + p.p01.array() * M2.array() * p.p00.array()) /
            n2;
  }
  k.kappa1.diagonal().setZero();
  k.kappa2.diagonal().setZero();
  k.xi1.diagonal().setZero();
  k.xi2.diagonal().setZero();
  return k;
}

void density_diagnostics(const DyadProbTable& p, AsymptoticTable& t) {
  double hi = 0.0, lo = 1.0;
  for (int i = 0; i < p.n; ++i)
    for (int j = 0; j < p.n; ++j) {
      if (i == j) continue;
      hi = std::max(hi, p.p01(i, j));
      lo = std::min(lo, p.p01(i, j));
    }
  t.c_upper = hi;
  t.c_lower = lo;
}

}  // namespace

double g_m(const double* x, const double* y, int m) {
  double sq = 0.0, lin = 0.0;
  for (int k = 0; k < m; ++k) {
    sq += x[k] * x[k] * y[k];
    lin += x[k] * y[k];
  }
  return sq - lin * lin;
}

AbcTables abc_tables(const DyadProbTable& p, int abc) {
  const int n = p.n;
  const double n1 = double(n);
  const double n2 = n1 * n1;
  const double n3 = n2 * n1;
  const Matrix& Px = pick_x(p, abc);
  const Matrix& Py = pick_y(p, abc);

  AbcTables out;
  Matrix S1 = Py * Px.transpose();
  {
    Matrix G = Px.transpose() * S1;
    out.mu_t = G.diagonal() / n2;
    Vector w = Px.cwiseProduct(Py).rowwise().sum();
    Vector z = Px.cwiseProduct(Py).colwise().sum().transpose();
    Matrix PxT = Px.transpose();
    out.mu_it = (G.array() - PxT.array().rowwise() * w.transpose().array() -
                 PxT.array().colwise() * z.array() +
                 PxT.array().square() * Py.transpose().array()) /
                n2;
    out.mu_it.diagonal().setZero();
  }
  require_positive(out.mu_t, "mu_t");

  // mu of the swapped tuple (b,a,c), needed by the eta middle correction
  Vector mu_sw(n);
  {
    Matrix S1s = Px * Py.transpose();
    for (int t = 0; t < n; ++t) mu_sw[t] = Py.col(t).dot(S1s.col(t)) / n2;
  }
  require_positive(mu_sw, "mu_t (swapped tuple)");

  Matrix S2 = Px.transpose() * Py;
  Matrix Pys = Py.array().rowwise() / mu_sw.transpose().array();
  Matrix T3 = Pys * Py;
  Matrix Sc1 = S1.array().rowwise() / out.mu_t.transpose().array();
  Matrix Sc2 = S2.array().colwise() / out.mu_t.array();
  out.eta = (Sc1 + Sc2 - T3) / n1;
  out.zeta1 = (Sc1.array().square() + Sc2.array().square()) / (2.0 * n3);
  Matrix Sc3 = S2.transpose().array().rowwise() / out.mu_t.transpose().array();
  out.zeta2 = Sc1.array() * Sc3.array() / n3;
  out.eta.diagonal().setZero();
  out.zeta1.diagonal().setZero();
  out.zeta2.diagonal().setZero();
  return out;
}

KappaXi kappa_xi(const DyadProbTable& p) {
  const MuPair m100 = mu_pair(p, 0b100);
  const MuPair m010 = mu_pair(p, 0b010);
  return kappa_xi_core(p, m100.mu_it, m010.mu_it);
}

AsymptoticTable variance_table(const DyadProbTable& p) {
  const int n = p.n;
  if (n < 3) throw Error(ErrorKind::InvalidDesign, "need at least 3 nodes");
  const double n1 = double(n);
  const double n2 = n1 * n1;
  const double n4 = n2 * n2;

  const AbcTables a100 = abc_tables(p, 0b100);
  const AbcTables a010 = abc_tables(p, 0b010);
  const AbcTables a101 = abc_tables(p, 0b101);
  const AbcTables a011 = abc_tables(p, 0b011);

  AsymptoticTable out;
  out.n = n;
  out.source = "true";
  density_diagnostics(p, out);

  Kahan st, sr, bt, br;
  for (int i = 1; i < n; ++i) {
    for (int t = 0; t < i; ++t) {
      const double p01 = p.p01(i, t), p10 = p.p10(i, t);
      const double p00 = p.p00(i, t), p11 = p.p11(i, t);

      const double x3[3] = {a100.eta(i, t), a100.eta(t, i),
                            -(a010.eta(i, t) + a010.eta(t, i))};
      const double y3[3] = {p01, p10, p00};
      st.add(g_m(x3, y3, 3));

      const double x4[4] = {-(a100.eta(i, t) + a011.eta(t, i)),
                            a010.eta(i, t) + a010.eta(t, i),
                            a101.eta(i, t) + a101.eta(t, i),
                            -(a011.eta(i, t) + a100.eta(t, i))};
      const double y4[4] = {p01, p00, p11, p10};
      sr.add(g_m(x4, y4, 4));

      bt.add(-a100.zeta1(i, t) * p01 * (1 - p01) - a100.zeta1(t, i) * p10 * (1 - p10) +
             (a100.zeta2(i, t) + a100.zeta2(t, i)) * p10 * p01 +
             (a010.zeta1(i, t) + a010.zeta1(t, i) + a010.zeta2(i, t) + a010.zeta2(t, i)) *
                 p00 * (1 - p00));

      br.add((a100.zeta1(i, t) + a011.zeta1(t, i)) * p01 * (1 - p01) +
             (a100.zeta1(t, i) + a011.zeta1(i, t)) * p10 * (1 - p10) -
             (a101.zeta1(i, t) + a101.zeta1(t, i) + a101.zeta2(i, t) + a101.zeta2(t, i)) *
                 p11 * (1 - p11) -
             (a010.zeta1(i, t) + a010.zeta1(t, i) + a010.zeta2(i, t) + a010.zeta2(t, i)) *
                 p00 * (1 - p00) -
             (a100.zeta2(i, t) + a100.zeta2(t, i) + a011.zeta2(i, t) + a011.zeta2(t, i)) *
                 p01 * p10);
    }
  }
  out.sigma_theta2 = st.s / n4;
  out.sigma_rho2 = sr.s / n4;
  out.theta_star = bt.s / n2;
  out.rho_star = br.s / n2;

  const KappaXi kx = kappa_xi_core(p, a100.mu_it, a010.mu_it);
  out.sigma_alpha2.resize(n);
  out.sigma_beta2.resize(n);
  out.sigma_cross.resize(n);
  for (int i = 0; i < n; ++i) {
    Kahan sa, sb, sc;
    for (int k = 0; k < n; ++k) {
      if (k == i) continue;
      {
        const double x2[2] = {kx.kappa1(i, k), -kx.kappa2(i, k)};
        const double y2[2] = {p.p01(k, i), p.p00(k, i)};
        sa.add(g_m(x2, y2, 2));
      }
      {
        const double x2[2] = {kx.xi1(i, k), -kx.xi2(i, k)};
        const double y2[2] = {p.p01(i, k), p.p00(i, k)};
        sb.add(g_m(x2, y2, 2));
      }
      sc.add(-kx.kappa1(i, k) * kx.xi1(i, k) * p.p10(i, k) * p.p01(i, k) +
             kx.kappa1(i, k) * kx.xi2(i, k) * p.p10(i, k) * p.p00(i, k) +
             kx.kappa2(i, k) * kx.xi1(i, k) * p.p01(i, k) * p.p01(i, k) +
             kx.kappa2(i, k) * kx.xi2(i, k) * p.p00(i, k) * (1 - p.p01(i, k)));
    }
    out.sigma_alpha2[i] = sa.s / n2;
    out.sigma_beta2[i] = sb.s / n2;
    out.sigma_cross[i] = sc.s / n2;
  }
  return out;
}

std::pair<double, double> bias_terms(const DyadProbTable& p) {
  const int n = p.n;
  if (n < 3) throw Error(ErrorKind::InvalidDesign, "need at least 3 nodes");
  const double n1 = double(n);
  const double n2 = n1 * n1;
  const double n3 = n2 * n1;

  // zeta tables only: two gemms per tuple, mu via column dots
  struct Z {
    Matrix zeta1, zeta2;
  };
  auto zetas = [&](int abc) {
    const Matrix& Px = pick_x(p, abc);
    const Matrix& Py = pick_y(p, abc);
    Matrix S1 = Py * Px.transpose();
    Vector mu(n);
    for (int t = 0; t < n; ++t) mu[t] = Px.col(t).dot(S1.col(t)) / n2;
    require_positive(mu, "mu_t");
    Matrix S2 = Px.transpose() * Py;
    Matrix Sc1 = S1.array().rowwise() / mu.transpose().array();
    Matrix Sc2 = S2.array().colwise() / mu.array();
    Matrix Sc3 = S2.transpose().array().rowwise() / mu.transpose().array();
    Z z;
    z.zeta1 = (Sc1.array().square() + Sc2.array().square()) / (2.0 * n3);
    z.zeta2 = Sc1.array() * Sc3.array() / n3;
    z.zeta1.diagonal().setZero();
    z.zeta2.diagonal().setZero();
    return z;
  };
  const Z z100 = zetas(0b100), z010 = zetas(0b010), z101 = zetas(0b101), z011 = zetas(0b011);

  Kahan bt, br;
  for (int i = 1; i < n; ++i) {
    for (int t = 0; t < i; ++t) {
      const double p01 = p.p01(i, t), p10 = p.p10(i, t);
      const double p00 = p.p00(i, t), p11 = p.p11(i, t);
      bt.add(-z100.zeta1(i, t) * p01 * (1 - p01) - z100.zeta1(t, i) * p10 * (1 - p10) +
             (z100.zeta2(i, t) + z100.zeta2(t, i)) * p10 * p01 +
             (z010.zeta1(i, t) + z010.zeta1(t, i) + z010.zeta2(i, t) + z010.zeta2(t, i)) *
                 p00 * (1 - p00));
      br.add((z100.zeta1(i, t) + z011.zeta1(t, i)) * p01 * (1 - p01) +
             (z100.zeta1(t, i) + z011.zeta1(i, t)) * p10 * (1 - p10) -
             (z101.zeta1(i, t) + z101.zeta1(t, i) + z101.zeta2(i, t) + z101.zeta2(t, i)) *
                 p11 * (1 - p11) -
             (z010.zeta1(i, t) + z010.zeta1(t, i) + z010.zeta2(i, t) + z010.zeta2(t, i)) *
                 p00 * (1 - p00) -
             (z100.zeta2(i, t) + z100.zeta2(t, i) + z011.zeta2(i, t) + z011.zeta2(t, i)) *
                 p01 * p10);
    }
  }
  return {bt.s / n2, br.s / n2};
}

AsymptoticTable plug_in(const EstimateReport& est) {
  ParamVector pv = est.params();
  if (pv.alpha.size() == 0)
    throw Error(ErrorKind::InvalidDesign, "plug-in table needs node-level estimates");
  if (!pv.is_finite())
    throw Error(ErrorKind::InvalidDesign,
                "plug-in table needs finite estimates for every node");
  AsymptoticTable t = variance_table(dyad_probs(pv));
  t.source = "plugin";
  return t;
}

// ---------------------------------------------------------------------------
// Naive transcription oracle: every quantity from its definition with plain
// loops. Deliberately shares no code with the accelerated path above.
// ---------------------------------------------------------------------------

AbcTables abc_tables_naive(const DyadProbTable& p, int abc) {
  const int n = p.n;
  const double n1 = double(n);
  const double n2 = n1 * n1;
  const double n3 = n2 * n1;
  const Matrix& Px = pick_x(p, abc);
  const Matrix& Py = pick_y(p, abc);
  const Matrix& Qx = pick_x(p, swap_ab(abc));
  const Matrix& Qy = pick_y(p, swap_ab(abc));

  AbcTables out;
  out.mu_t = Vector::Zero(n);
  Vector mu_sw = Vector::Zero(n);
  for (int t = 0; t < n; ++t) {
    double s = 0.0, ssw = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == t || j == t || i == j) continue;
        s += Px(i, t) * Py(i, j) * Px(t, j);
        ssw += Qx(i, t) * Qy(i, j) * Qx(t, j);
      }
    }
    out.mu_t[t] = s / n2;
    mu_sw[t] = ssw / n2;
  }

  out.mu_it = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int t = 0; t < n; ++t) {
      if (i == t) continue;
      double s = 0.0;
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
          if (k == i || k == t || l == i || l == t || k == l) continue;
          s += Px(k, i) * Py(k, l) * Px(t, l);
        }
      }
      out.mu_it(i, t) = s / n2;
    }
  }

  out.eta = Matrix::Zero(n, n);
  out.zeta1 = Matrix::Zero(n, n);
  out.zeta2 = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int t = 0; t < n; ++t) {
      if (i == t) continue;
      double e = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i || j == t) continue;
        e += Px(t, j) * Py(i, j) / out.mu_t[t] + Px(j, i) * Py(j, t) / out.mu_t[i] -
             Py(i, j) * Py(j, t) / mu_sw[j];
      }
      out.eta(i, t) = e / n1;
      double s1 = 0.0, s2 = 0.0, s3 = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == t) continue;
        s1 += Px(t, j) * Py(i, j);
        s2 += Px(j, i) * Py(j, t);
        s3 += Px(j, t) * Py(j, i);
      }
      const double r1 = s1 / out.mu_t[t], r2 = s2 / out.mu_t[i], r3 = s3 / out.mu_t[t];
      out.zeta1(i, t) = (r1 * r1 + r2 * r2) / (2.0 * n3);
      out.zeta2(i, t) = r1 * r3 / n3;
    }
  }
  return out;
}

KappaXi kappa_xi_naive(const DyadProbTable& p) {
  const int n = p.n;
  const double n2 = double(n) * n;
  const Matrix MU100 = abc_tables_naive(p, 0b100).mu_it;
  const Matrix MU010 = abc_tables_naive(p, 0b010).mu_it;

  KappaXi k;
  k.kappa1 = Matrix::Zero(n, n);
  k.kappa2 = Matrix::Zero(n, n);
  k.xi1 = Matrix::Zero(n, n);
  k.xi2 = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int q = 0; q < n; ++q) {
      if (i == q) continue;
      double s1 = 0.0, s2 = 0.0;
      for (int t = 0; t < n; ++t) {
        if (t == i || t == q) continue;
        for (int l = 0; l < n; ++l) {
          if (l == i || l == q || l == t) continue;
          s1 += p.p01(t, l) * p.p00(q, l) / MU100(i, t);
          s2 += p.p00(t, l) * p.p01(q, l) / MU010(i, t);
        }
      }
      k.kappa1(i, q) = s1 / n2;
      k.kappa2(i, q) = s2 / n2;
    }
  }
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < n; ++l) {
      if (j == l) continue;
      double s1 = 0.0, s2 = 0.0;
      for (int t = 0; t < n; ++t) {
        if (t == j || t == l) continue;
        for (int q = 0; q < n; ++q) {
          if (q == j || q == l || q == t) continue;
          s1 += p.p01(q, t) * p.p00(q, l) / MU100(t, j);
          s2 += p.p00(q, t) * p.p01(q, l) / MU010(t, j);
        }
      }
      k.xi1(j, l) = s1 / n2;
      k.xi2(j, l) = s2 / n2;
    }
  }
  return k;
}

AsymptoticTable variance_table_naive(const DyadProbTable& p) {
  const int n = p.n;
  if (n > 64)
    throw Error(ErrorKind::InvalidDesign,
                "naive oracle is quartic; guarded to n <= 64, got " + std::to_string(n));
  if (n < 3) throw Error(ErrorKind::InvalidDesign, "need at least 3 nodes");
  const double n2 = double(n) * n;
  const double n4 = n2 * n2;

  const AbcTables a100 = abc_tables_naive(p, 0b100);
  const AbcTables a010 = abc_tables_naive(p, 0b010);
  const AbcTables a101 = abc_tables_naive(p, 0b101);
  const AbcTables a011 = abc_tables_naive(p, 0b011);
  const KappaXi kx = kappa_xi_naive(p);

  AsymptoticTable out;
  out.n = n;
  out.source = "true";
  density_diagnostics(p, out);

  double st = 0.0, sr = 0.0, bt = 0.0, br = 0.0;
  for (int i = 1; i < n; ++i) {
    for (int t = 0; t < i; ++t) {
      const double p01 = p.p01(i, t), p10 = p.p10(i, t);
      const double p00 = p.p00(i, t), p11 = p.p11(i, t);
      {
        const double x[3] = {a100.eta(i, t), a100.eta(t, i),
                             -(a010.eta(i, t) + a010.eta(t, i))};
        const double y[3] = {p01, p10, p00};
        double sq = 0.0, lin = 0.0;
        for (int k = 0; k < 3; ++k) {
          sq += x[k] * x[k] * y[k];
          lin += x[k] * y[k];
        }
        st += sq - lin * lin;
      }
      {
        const double x[4] = {-(a100.eta(i, t) + a011.eta(t, i)),
                             a010.eta(i, t) + a010.eta(t, i),
                             a101.eta(i, t) + a101.eta(t, i),
                             -(a011.eta(i, t) + a100.eta(t, i))};
        const double y[4] = {p01, p00, p11, p10};
        double sq = 0.0, lin = 0.0;
        for (int k = 0; k < 4; ++k) {
          sq += x[k] * x[k] * y[k];
          lin += x[k] * y[k];
        }
        sr += sq - lin * lin;
      }
      bt += -a100.zeta1(i, t) * p01 * (1 - p01) - a100.zeta1(t, i) * p10 * (1 - p10) +
            (a100.zeta2(i, t) + a100.zeta2(t, i)) * p10 * p01 +
            (a010.zeta1(i, t) + a010.zeta1(t, i) + a010.zeta2(i, t) + a010.zeta2(t, i)) *
                p00 * (1 - p00);
      br += (a100.zeta1(i, t) + a011.zeta1(t, i)) * p01 * (1 - p01) +
            (a100.zeta1(t, i) + a011.zeta1(i, t)) * p10 * (1 - p10) -
            (a101.zeta1(i, t) + a101.zeta1(t, i) + a101.zeta2(i, t) + a101.zeta2(t, i)) *
                p11 * (1 - p11) -
            (a010.zeta1(i, t) + a010.zeta1(t, i) + a010.zeta2(i, t) + a010.zeta2(t, i)) *
                p00 * (1 - p00) -
            (a100.zeta2(i, t) + a100.zeta2(t, i) + a011.zeta2(i, t) + a011.zeta2(t, i)) *
                p01 * p10;
    }
  }
  out.sigma_theta2 = st / n4;
  out.sigma_rho2 = sr / n4;
  out.theta_star = bt / n2;
  out.rho_star = br / n2;

  out.sigma_alpha2 = Vector::Zero(n);
  out.sigma_beta2 = Vector::Zero(n);
  out.sigma_cross = Vector::Zero(n);
  for (int i = 0; i < n; ++i) {
    double sa = 0.0, sb = 0.0, sc = 0.0;
    for (int q = 0; q < n; ++q) {
      if (q == i) continue;
      {
        const double k1 = kx.kappa1(i, q), k2 = kx.kappa2(i, q);
        const double y1 = p.p01(q, i), y2 = p.p00(q, i);
        sa += k1 * k1 * y1 + k2 * k2 * y2 - (k1 * y1 - k2 * y2) * (k1 * y1 - k2 * y2);
      }
      {
        const double x1 = kx.xi1(i, q), x2 = kx.xi2(i, q);
        const double y1 = p.p01(i, q), y2 = p.p00(i, q);
        sb += x1 * x1 * y1 + x2 * x2 * y2 - (x1 * y1 - x2 * y2) * (x1 * y1 - x2 * y2);
      }
      sc += -kx.kappa1(i, q) * kx.xi1(i, q) * p.p10(i, q) * p.p01(i, q) +
            kx.kappa1(i, q) * kx.xi2(i, q) * p.p10(i, q) * p.p00(i, q) +
            kx.kappa2(i, q) * kx.xi1(i, q) * p.p01(i, q) * p.p01(i, q) +
            kx.kappa2(i, q) * kx.xi2(i, q) * p.p00(i, q) * (1 - p.p01(i, q));
    }
    out.sigma_alpha2[i] = sa / n2;
    out.sigma_beta2[i] = sb / n2;
    out.sigma_cross[i] = sc / n2;
  }
  return out;
}

}  // namespace tdre
