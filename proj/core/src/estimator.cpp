#include "tdre/estimator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace tdre {

namespace {

constexpr int kFloatGemmMaxN = 4000;  // (n-1)(n-2) < 2^24 keeps fp32 sums exact
constexpr int kFullModeMaxN = 6000;   // full B1/B2 need several n^2 buffers

// ---------------------------------------------------------------- dense path

// Packed 0/1 rows, 64 nodes per word; products of configuration matrices
// become AND + popcount over rows, exact at any n.
struct BitRows {
  int n = 0, words = 0;
  std::vector<std::uint64_t> bits;

  explicit BitRows(int n_, bool ones = false)
      : n(n_), words((n_ + 63) / 64),
        bits(std::size_t(n_) * words, ones ? ~0ull : 0ull) {
    if (!ones) return;
    const int tail = n & 63;
    if (tail)
      for (int i = 0; i < n; ++i) row(i)[words - 1] = (1ull << tail) - 1;
    for (int i = 0; i < n; ++i) clear(i, i);
  }

  const std::uint64_t* row(int i) const { return bits.data() + std::size_t(i) * words; }
  std::uint64_t* row(int i) { return bits.data() + std::size_t(i) * words; }
  void set(int i, int j) { row(i)[j >> 6] |= 1ull << (j & 63); }
  void clear(int i, int j) { row(i)[j >> 6] &= ~(1ull << (j & 63)); }
};

std::int64_t and_popcount(const std::uint64_t* a, const std::uint64_t* b, int words) {
  std::int64_t s = 0;
  for (int w = 0; w < words; ++w) s += std::popcount(a[w] & b[w]);
  return s;
}

template <typename F>
void for_set_bits(const std::uint64_t* row, int words, F f) {
  for (int w = 0; w < words; ++w) {
    std::uint64_t m = row[w];
    while (m) {
      f((w << 6) + std::countr_zero(m));
      m &= m - 1;
    }
  }
}

template <typename Mat>
void dense_counts(const DyadTally& t, const CountOptions& o, TripleCounts& out) {
  const int n = t.n;
  const int words = (n + 63) / 64;
  // r01t packs the columns of A01 (rows of A10); A00 and A11 are symmetric,
  // so their packed rows double as columns.
  BitRows r01(n), r01t(n), r11(n), r00(n, /*ones=*/true);
  for (auto [i, j] : t.a01) {
    r01.set(i, j);
    r01t.set(j, i);
    r00.clear(i, j);
    r00.clear(j, i);
  }
  for (auto [i, j] : t.a11) {
    r11.set(i, j);
    r00.clear(i, j);
  }

  out.b1d.resize(n);
  out.b2d.resize(n);
  out.b3d.resize(n);
  out.b4d.resize(n);
  for (int i = 0; i < n; ++i) {
    std::int64_t b3 = 0, b4 = 0;
    for_set_bits(r01t.row(i), words, [&](int j) {
      b4 += and_popcount(r11.row(j), r01.row(i), words);   // (A01 A11)[i,j] A01[j,i]
    });
    for_set_bits(r11.row(i), words, [&](int j) {
      b3 += and_popcount(r11.row(i), r01.row(j), words);   // (A11 A10)[i,j] A11[j,i]
    });
    out.b3d[i] = double(b3);
    out.b4d[i] = double(b4);
  }
  if (o.diag_only) {
    // in full mode these fall out of B1/B2 below
    for (int i = 0; i < n; ++i) {
      std::int64_t b1 = 0, b2 = 0;
      for_set_bits(r01t.row(i), words, [&](int j) {
        b1 += and_popcount(r01.row(i), r00.row(j), words);   // (A01 A00)[i,j] A01[j,i]
      });
      for_set_bits(r00.row(i), words, [&](int j) {
        b2 += and_popcount(r00.row(i), r01t.row(j), words);  // (A00 A01)[i,j] A00[j,i]
      });
      out.b1d[i] = double(b1);
      out.b2d[i] = double(b2);
    }
  }

  if (o.diag_only && !o.full_b34) return;

  // off-diagonal entries: popcount the inner product, one gemm for the outer
  Mat a01 = Mat::Zero(n, n), a11 = Mat::Zero(n, n), a00 = Mat::Ones(n, n);
  a00.diagonal().setZero();
  for (auto [i, j] : t.a01) {
    a01(i, j) = 1;
    a00(i, j) = 0;
    a00(j, i) = 0;
  }
  for (auto [i, j] : t.a11) {
    a11(i, j) = 1;
    a00(i, j) = 0;
  }

  Mat tmp(n, n);
  if (!o.diag_only) {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        tmp(i, j) = and_popcount(r01.row(i), r00.row(j), words);  // A01 A00
    out.B1.noalias() = (tmp * a01).template cast<double>();
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        tmp(i, j) = and_popcount(r00.row(i), r01t.row(j), words);  // A00 A01
    out.B2.noalias() = (tmp * a00).template cast<double>();
    out.b1d = out.B1.diagonal();
    out.b2d = out.B2.diagonal();
    out.full = true;
  }

  if (o.full_b34) {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        tmp(i, j) = and_popcount(r11.row(i), r01.row(j), words);  // A11 A10
    out.B3.noalias() = (tmp * a11).template cast<double>();
    // A11 symmetric: A01 A11 = (A11 A10)^T
    out.B4.noalias() = (tmp.transpose() * a01).template cast<double>();
  }
}

// ----------------------------------------------------------- brute-force path

// configuration code per ordered pair: 0,1,2,3 = 00,01,10,11 (diag 0)
std::vector<std::uint8_t> config_codes(const DyadTally& t) {
  const int n = t.n;
  std::vector<std::uint8_t> c(std::size_t(n) * n, 0);
  for (auto [i, j] : t.a01) {
    c[std::size_t(i) * n + j] = 1;
    c[std::size_t(j) * n + i] = 2;
  }
  for (auto [i, j] : t.a11) c[std::size_t(i) * n + j] = 3;
  return c;
}

void brute_counts(const DyadTally& t, const CountOptions& o, TripleCounts& out) {
  const int n = t.n;
  const auto c = config_codes(t);
  auto is = [&](int i, int j, std::uint8_t code) {
    return i != j && c[std::size_t(i) * n + j] == code;
  };
  auto triple = [&](int i, int j, std::uint8_t u, std::uint8_t v, std::uint8_t w) {
    std::int64_t s = 0;
    for (int k = 0; k < n; ++k) {
      if (!is(i, k, u)) continue;
      for (int l = 0; l < n; ++l)
        if (is(k, l, v) && is(l, j, w)) ++s;
    }
    return static_cast<double>(s);
  };
  out.b1d.resize(n);
  out.b2d.resize(n);
  out.b3d.resize(n);
  out.b4d.resize(n);
  for (int i = 0; i < n; ++i) {
    out.b1d[i] = triple(i, i, 1, 0, 1);
    out.b2d[i] = triple(i, i, 0, 1, 0);
    out.b3d[i] = triple(i, i, 3, 2, 3);
    out.b4d[i] = triple(i, i, 1, 3, 1);
  }
  if (o.full_b34) {
    out.B3.resize(n, n);
    out.B4.resize(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        out.B3(i, j) = triple(i, j, 3, 2, 3);
        out.B4(i, j) = triple(i, j, 1, 3, 1);
      }
  }
  if (o.diag_only) return;
  out.B1.resize(n, n);
  out.B2.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      out.B1(i, j) = triple(i, j, 1, 0, 1);
      out.B2(i, j) = triple(i, j, 0, 1, 0);
    }
  out.full = true;
}

// ----------------------------------------------------------------- sparse path

struct Csr {
  std::vector<std::int64_t> off;  // n+1
  std::vector<std::int32_t> col;  // sorted within each row

  static Csr from_pairs(int n, const std::vector<std::pair<std::int32_t, std::int32_t>>& pairs,
                        bool transpose) {
    Csr c;
    c.off.assign(n + 1, 0);
    for (auto [i, j] : pairs) c.off[(transpose ? j : i) + 1]++;
    for (int i = 0; i < n; ++i) c.off[i + 1] += c.off[i];
    c.col.resize(pairs.size());
    std::vector<std::int64_t> cur(c.off.begin(), c.off.end() - 1);
    for (auto [i, j] : pairs) {
      if (transpose)
        c.col[cur[j]++] = i;
      else
        c.col[cur[i]++] = j;
    }
    for (int i = 0; i < n; ++i)
      std::sort(c.col.begin() + c.off[i], c.col.begin() + c.off[i + 1]);
    return c;
  }

  std::int64_t deg(int i) const { return off[i + 1] - off[i]; }
  const std::int32_t* begin(int i) const { return col.data() + off[i]; }
  const std::int32_t* end(int i) const { return col.data() + off[i + 1]; }
};

// union of the per-row supports of the three non-null configurations
Csr union_rows(int n, const Csr& a, const Csr& b, const Csr& c) {
  Csr u;
  u.off.assign(n + 1, 0);
  for (int i = 0; i < n; ++i)
    u.off[i + 1] = u.off[i] + a.deg(i) + b.deg(i) + c.deg(i);
  u.col.resize(u.off[n]);
  for (int i = 0; i < n; ++i) {
    auto out = u.col.begin() + u.off[i];
    out = std::copy(a.begin(i), a.end(i), out);
    out = std::copy(b.begin(i), b.end(i), out);
    std::copy(c.begin(i), c.end(i), out);
    std::sort(u.col.begin() + u.off[i], u.col.begin() + u.off[i + 1]);
  }
  return u;
}

// marks lists' entries, probes others; reset by re-walking the marked list
struct Marker {
  std::vector<std::uint8_t> m;
  explicit Marker(int n) : m(n, 0) {}
  template <typename It>
  void set(It b, It e) {
    for (auto p = b; p != e; ++p) m[*p] = 1;
  }
  template <typename It>
  void clear(It b, It e) {
    for (auto p = b; p != e; ++p) m[*p] = 0;
  }
};

void sparse_counts(const DyadTally& t, const CountOptions& o, TripleCounts& out) {
  const int n = t.n;
  const Csr r01 = Csr::from_pairs(n, t.a01, false);   // A01 rows
  const Csr c01 = Csr::from_pairs(n, t.a01, true);    // A01 columns (= A10 rows)
  const Csr r11 = Csr::from_pairs(n, t.a11, false);   // symmetric
  const Csr rs = union_rows(n, r01, c01, r11);        // S = A01 + A10 + A11
  const double m01 = static_cast<double>(t.a01.size());

  Vector degs(n);
  for (int i = 0; i < n; ++i) degs[i] = double(rs.deg(i));

  out.b1d.resize(n);
  out.b2d.resize(n);
  out.b3d.resize(n);
  out.b4d.resize(n);

  Marker mark(n);
  for (int i = 0; i < n; ++i) {
    // b1: B1_tt = |row01| * |col01| - sum_{k in row01, l in col01} S_kl
    double q1 = 0;
    double cost_r = 0, cost_c = 0;
    for (auto p = r01.begin(i); p != r01.end(i); ++p) cost_r += degs[*p];
    for (auto p = c01.begin(i); p != c01.end(i); ++p) cost_c += degs[*p];
    if (cost_r <= cost_c) {
      mark.set(c01.begin(i), c01.end(i));
      for (auto p = r01.begin(i); p != r01.end(i); ++p)
        for (auto q = rs.begin(*p); q != rs.end(*p); ++q) q1 += mark.m[*q];
      mark.clear(c01.begin(i), c01.end(i));
    } else {
      mark.set(r01.begin(i), r01.end(i));
      for (auto p = c01.begin(i); p != c01.end(i); ++p)
        for (auto q = rs.begin(*p); q != rs.end(*p); ++q) q1 += mark.m[*q];
      mark.clear(r01.begin(i), r01.end(i));
    }
    out.b1d[i] = double(r01.deg(i)) * double(c01.deg(i)) - q1;

    // b2: B2_tt = m01 - v_t - w_t + (S A01 S)_tt
    double v = 0, w = 0, sas = 0;
    for (auto p = rs.begin(i); p != rs.end(i); ++p) {
      v += double(r01.deg(*p));
      w += double(c01.deg(*p));
    }
    mark.set(rs.begin(i), rs.end(i));
    if (v <= w) {
      for (auto p = rs.begin(i); p != rs.end(i); ++p)
        for (auto q = r01.begin(*p); q != r01.end(*p); ++q) sas += mark.m[*q];
    } else {
      for (auto p = rs.begin(i); p != rs.end(i); ++p)
        for (auto q = c01.begin(*p); q != c01.end(*p); ++q) sas += mark.m[*q];
    }
    mark.clear(rs.begin(i), rs.end(i));
    out.b2d[i] = m01 - v - w + sas;

    // b3: sum over mutual partners k of |row10(k) ∩ row11(t)|
    double b3 = 0;
    mark.set(r11.begin(i), r11.end(i));
    for (auto p = r11.begin(i); p != r11.end(i); ++p)
      for (auto q = c01.begin(*p); q != c01.end(*p); ++q) b3 += mark.m[*q];
    mark.clear(r11.begin(i), r11.end(i));
    out.b3d[i] = b3;

    // b4: sum over k in row01(t) of |row11(k) ∩ col01(t)|
    double b4 = 0;
    mark.set(c01.begin(i), c01.end(i));
    for (auto p = r01.begin(i); p != r01.end(i); ++p)
      for (auto q = r11.begin(*p); q != r11.end(*p); ++q) b4 += mark.m[*q];
    mark.clear(c01.begin(i), c01.end(i));
    out.b4d[i] = b4;
  }

  const bool need_full = !o.diag_only;
  if (!need_full && !o.full_b34) return;

  Vector r01d(n), c01d(n), vvec(n), wvec(n);
  for (int i = 0; i < n; ++i) {
    r01d[i] = double(r01.deg(i));
    c01d[i] = double(c01.deg(i));
    double v = 0, w = 0;
    for (auto p = rs.begin(i); p != rs.end(i); ++p) {
      v += double(r01.deg(*p));
      w += double(c01.deg(*p));
    }
    vvec[i] = v;
    wvec[i] = w;
  }

  if (need_full) {
    // U = S·A01 shared by both products
    Matrix U = Matrix::Zero(n, n);
    for (int k = 0; k < n; ++k)
      for (auto p = rs.begin(k); p != rs.end(k); ++p)
        for (auto q = r01.begin(*p); q != r01.end(*p); ++q) U(k, *q) += 1.0;

    // B1 = r01 c01^T - A01·A01 - A01·U
    out.B1.noalias() = r01d * c01d.transpose();
    for (int i = 0; i < n; ++i)
      for (auto p = r01.begin(i); p != r01.end(i); ++p) {
        out.B1.row(i) -= U.row(*p);
        for (auto q = r01.begin(*p); q != r01.end(*p); ++q) out.B1(i, *q) -= 1.0;
      }

    // B2 = m01 - r01_i - c01_j - v_i - w_j + A01 + A01·S + S·A01 + (S·A01)·S
    Matrix V = Matrix::Zero(n, n);  // A01·S
    for (int i = 0; i < n; ++i)
      for (auto p = r01.begin(i); p != r01.end(i); ++p)
        for (auto q = rs.begin(*p); q != rs.end(*p); ++q) V(i, *q) += 1.0;
    out.B2 = Matrix::Zero(n, n);
    for (int j = 0; j < n; ++j)
      for (auto p = rs.begin(j); p != rs.end(j); ++p) out.B2.col(j) += U.col(*p);
    out.B2 += U + V;
    for (auto [i, j] : t.a01) out.B2(i, j) += 1.0;
    out.B2.colwise() -= (r01d + vvec);
    out.B2.rowwise() -= (c01d + wvec).transpose();
    out.B2.array() += m01;

    out.b1d = out.B1.diagonal();
    out.b2d = out.B2.diagonal();
    out.full = true;
  }

  if (o.full_b34) {
    Matrix t3 = Matrix::Zero(n, n);  // A11·A10
    for (int i = 0; i < n; ++i)
      for (auto p = r11.begin(i); p != r11.end(i); ++p)
        for (auto q = c01.begin(*p); q != c01.end(*p); ++q) t3(i, *q) += 1.0;
    out.B3 = Matrix::Zero(n, n);
    for (int j = 0; j < n; ++j)
      for (auto p = r11.begin(j); p != r11.end(j); ++p) out.B3.col(j) += t3.col(*p);

    Matrix t4 = Matrix::Zero(n, n);  // A01·A11
    for (int i = 0; i < n; ++i)
      for (auto p = r01.begin(i); p != r01.end(i); ++p)
        for (auto q = r11.begin(*p); q != r11.end(*p); ++q) t4(i, *q) += 1.0;
    out.B4 = Matrix::Zero(n, n);
    for (int j = 0; j < n; ++j)
      for (auto p = c01.begin(j); p != c01.end(j); ++p) out.B4.col(j) += t4.col(*p);
  }
}

CountMethod resolve_method(const DyadTally& t, const CountOptions& o) {
  if (o.method != CountMethod::Auto) return o.method;
  return t.edge_density() < 0.05 ? CountMethod::Sparse : CountMethod::Dense;
}

}  // namespace

TripleCounts triple_counts(const DyadTally& t, const CountOptions& opts) {
  if (t.n < 3)
    throw Error(ErrorKind::InvalidDesign,
                "triple counts need at least 3 nodes, got " + std::to_string(t.n));
  const CountMethod m = resolve_method(t, opts);
  if ((!opts.diag_only || opts.full_b34) && t.n > kFullModeMaxN)
    throw Error(ErrorKind::InvalidDesign,
                "full B1/B2 at n = " + std::to_string(t.n) +
                    " exceeds the memory budget; use diag-only (global) mode");
  TripleCounts out;
  out.n = t.n;
  switch (m) {
    case CountMethod::Dense:
      if (t.n <= kFloatGemmMaxN)
        dense_counts<Eigen::MatrixXf>(t, opts, out);
      else
        dense_counts<Matrix>(t, opts, out);
      out.method = "dense";
      break;
    case CountMethod::Sparse:
      sparse_counts(t, opts, out);
      out.method = "sparse";
      break;
    default:
      brute_counts(t, opts, out);
      out.method = "bruteforce";
      break;
  }
  return out;
}

namespace {

[[noreturn]] void throw_degenerate(const char* what, std::vector<int> nodes) {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  std::string msg = std::string("zero ") + what + " at node";
  msg += nodes.size() == 1 ? " " : "s ";
  for (std::size_t k = 0; k < nodes.size() && k < 8; ++k)
    msg += (k ? "," : "") + std::to_string(nodes[k]);
  if (nodes.size() > 8) msg += ",...(" + std::to_string(nodes.size()) + " total)";
  throw DegenerateError(std::move(msg), std::move(nodes));
}

}  // namespace

double estimate_theta(const TripleCounts& c) {
  std::vector<int> bad;
  double s = 0;
  for (int t = 0; t < c.n; ++t) {
    if (c.b1d[t] <= 0 || c.b2d[t] <= 0) {
      bad.push_back(t);
      continue;
    }
    s += std::log(c.b1d[t] / c.b2d[t]);
  }
  if (!bad.empty()) throw_degenerate("B1/B2 diagonal count", std::move(bad));
  return s / c.n;
}

double estimate_rho(const TripleCounts& c, double theta_hat) {
  std::vector<int> bad;
  double s = 0;
  for (int t = 0; t < c.n; ++t) {
    if (c.b3d[t] <= 0 || c.b4d[t] <= 0) {
      bad.push_back(t);
      continue;
    }
    s += std::log(c.b3d[t] / c.b4d[t]);
  }
  if (!bad.empty()) throw_degenerate("B3/B4 diagonal count", std::move(bad));
  return s / c.n - theta_hat;
}

Vector estimate_alpha(const TripleCounts& c, double theta_hat) {
  if (!c.full) throw Error(ErrorKind::InvalidDesign, "alpha needs full B1/B2 counts");
  std::vector<int> bad;
  Vector a(c.n);
  for (int i = 0; i < c.n; ++i) {
    double s = 0;
    bool ok = true;
    for (int t = 0; t < c.n; ++t) {
      if (c.B1(t, i) <= 0 || c.B2(i, t) <= 0) {
        ok = false;
        break;
      }
      s += std::log(c.B1(t, i) / c.B2(i, t));
    }
    if (!ok) {
      bad.push_back(i);
      continue;
    }
    a[i] = s / c.n - theta_hat;
  }
  if (!bad.empty()) throw_degenerate("off-diagonal B1/B2 count for alpha", std::move(bad));
  return a;
}

Vector estimate_beta(const TripleCounts& c, double theta_hat) {
  if (!c.full) throw Error(ErrorKind::InvalidDesign, "beta needs full B1/B2 counts");
  std::vector<int> bad;
  Vector b(c.n);
  for (int j = 0; j < c.n; ++j) {
    double s = 0;
    bool ok = true;
    for (int t = 0; t < c.n; ++t) {
      if (c.B1(j, t) <= 0 || c.B2(t, j) <= 0) {
        ok = false;
        break;
      }
      s += std::log(c.B1(j, t) / c.B2(t, j));
    }
    if (!ok) {
      bad.push_back(j);
      continue;
    }
    b[j] = s / c.n - theta_hat;
  }
  if (!bad.empty()) throw_degenerate("off-diagonal B1/B2 count for beta", std::move(bad));
  return b;
}

ParamVector EstimateReport::params() const {
  ParamVector p;
  p.rho = rho_hat;
  p.theta = theta_hat;
  p.alpha = alpha_hat;
  p.beta = beta_hat;
  return p;
}

EstimateReport estimate_all(const DyadTally& t, const EstimateOptions& opts) {
  CountOptions co;
  co.method = opts.method;
  co.diag_only = opts.global_only;
  const TripleCounts c = triple_counts(t, co);

  EstimateReport r;
  r.n = t.n;
  r.method = c.method;
  r.global_only = opts.global_only;
  r.theta_terms.resize(t.n);
  r.rho_terms.resize(t.n);

  r.theta_hat = estimate_theta(c);
  r.rho_hat = estimate_rho(c, r.theta_hat);
  for (int k = 0; k < t.n; ++k) {
    r.theta_terms[k] = std::log(c.b1d[k] / c.b2d[k]);
    r.rho_terms[k] = std::log(c.b3d[k] / c.b4d[k]);
  }
  if (!opts.global_only) {
    r.alpha_hat = estimate_alpha(c, r.theta_hat);
    r.beta_hat = estimate_beta(c, r.theta_hat);
    r.alpha_terms = r.alpha_hat.array() + r.theta_hat;
    r.beta_terms = r.beta_hat.array() + r.theta_hat;
  }
  return r;
}

std::vector<int> gamma_filter(const DyadTally& t, int min_out, int min_in) {
  CountOptions co;
  co.diag_only = true;
  const TripleCounts c = triple_counts(t, co);
  std::vector<int> keep;
  for (int i = 0; i < t.n; ++i)
    if (t.out_degree[i] >= min_out && t.in_degree[i] >= min_in && c.b1d[i] > 0 &&
        c.b2d[i] > 0 && c.b3d[i] > 0 && c.b4d[i] > 0)
      keep.push_back(i);
  return keep;
}

double estimate_theta_filtered(const TripleCounts& c, const std::vector<int>& gamma) {
  if (gamma.empty()) throw Error(ErrorKind::EmptyFilter, "gamma filter selected no nodes");
  std::vector<int> bad;
  double s = 0;
  for (int t : gamma) {
    if (t < 0 || t >= c.n)
      throw Error(ErrorKind::InvalidIndices, "filter node " + std::to_string(t));
    if (c.b1d[t] <= 0 || c.b2d[t] <= 0) {
      bad.push_back(t);
      continue;
    }
    s += std::log(c.b1d[t] / c.b2d[t]);
  }
  if (!bad.empty()) throw_degenerate("B1/B2 diagonal count", std::move(bad));
  return s / double(gamma.size());
}

EstimateReport estimate_all_filtered(const DyadTally& t, const std::vector<int>& gamma,
                                     const EstimateOptions& opts) {
  if (gamma.empty()) throw Error(ErrorKind::EmptyFilter, "gamma filter selected no nodes");
  CountOptions co;
  co.method = opts.method;
  co.diag_only = opts.global_only;
  const TripleCounts c = triple_counts(t, co);
  const double g = double(gamma.size());

  std::vector<char> in_gamma(t.n, 0);
  for (int v : gamma) {
    if (v < 0 || v >= t.n)
      throw Error(ErrorKind::InvalidIndices, "filter node " + std::to_string(v));
    in_gamma[v] = 1;
  }

  EstimateReport r;
  r.n = t.n;
  r.method = c.method;
  r.global_only = opts.global_only;
  for (int v = 0; v < t.n; ++v)
    if (!in_gamma[v]) r.skipped_nodes.push_back(v);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  r.theta_terms = Vector::Constant(t.n, nan);
  r.rho_terms = Vector::Constant(t.n, nan);

  std::vector<int> bad;
  double st = 0, sr = 0;
  for (int v : gamma) {
    if (c.b1d[v] <= 0 || c.b2d[v] <= 0 || c.b3d[v] <= 0 || c.b4d[v] <= 0) {
      bad.push_back(v);
      continue;
    }
    r.theta_terms[v] = std::log(c.b1d[v] / c.b2d[v]);
    r.rho_terms[v] = std::log(c.b3d[v] / c.b4d[v]);
    st += r.theta_terms[v];
    sr += r.rho_terms[v];
  }
  if (!bad.empty()) throw_degenerate("diagonal count inside the filter", std::move(bad));
  r.theta_hat = st / g;
  r.rho_hat = sr / g - r.theta_hat;

  if (!opts.global_only) {
    r.alpha_hat = Vector::Constant(t.n, nan);
    r.beta_hat = Vector::Constant(t.n, nan);
    for (int i : gamma) {
      double sa = 0, sb = 0;
      bool ok = true;
      for (int v : gamma) {
        if (c.B1(v, i) <= 0 || c.B2(i, v) <= 0 || c.B1(i, v) <= 0 || c.B2(v, i) <= 0) {
          ok = false;
          break;
        }
        sa += std::log(c.B1(v, i) / c.B2(i, v));
        sb += std::log(c.B1(i, v) / c.B2(v, i));
      }
      if (!ok) {
        bad.push_back(i);
        continue;
      }
      r.alpha_hat[i] = sa / g - r.theta_hat;
      r.beta_hat[i] = sb / g - r.theta_hat;
    }
    if (!bad.empty()) throw_degenerate("off-diagonal count inside the filter", std::move(bad));
    r.alpha_terms = r.alpha_hat.array() + r.theta_hat;
    r.beta_terms = r.beta_hat.array() + r.theta_hat;
  }
  return r;
}

}  // namespace tdre
