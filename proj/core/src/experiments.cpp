#include "tdre/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "tdre/asymptotics.hpp"
#include "tdre/estimator.hpp"
#include "tdre/inference.hpp"
#include "tdre/mle.hpp"
#include "tdre/rng.hpp"
#include "tdre/sample.hpp"
#include "tdre/tally.hpp"

namespace tdre {

namespace {

std::string fmt_full(double v) {
  char b[40];
  std::snprintf(b, sizeof b, "%.17g", v);
  return b;
}

std::string fmt_short(double v) {
  char b[40];
  std::snprintf(b, sizeof b, "%g", v);
  return b;
}

std::string trimmed(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

double wall_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::uint64_t rep_seed(const ExperimentConfig& cfg, std::size_t cell, int rep) {
  return CounterRng(cfg.seed).substream(cell).substream(std::uint64_t(rep)).key();
}

struct CellDesign {
  int n;
  ThetaSpec spec;
  double theta;
  ParamVector truth;
};

std::vector<CellDesign> grid(const ExperimentConfig& cfg) {
  if (cfg.replications < 1)
    throw Error(ErrorKind::InvalidDesign, "need at least one replication");
  if (cfg.n_values.empty() || cfg.theta_specs.empty())
    throw Error(ErrorKind::InvalidDesign, "config needs n_values and theta_specs");
  std::vector<CellDesign> cells;
  for (int n : cfg.n_values)
    for (const ThetaSpec& s : cfg.theta_specs) {
      const double th = s.resolve(n);
      if (!std::isfinite(th))
        throw Error(ErrorKind::InvalidDesign,
                    "theta spec " + s.label() + " is not finite at n=" +
                        std::to_string(n));
      cells.push_back({n, s, th, linear_design(n, cfg.rho, th)});
    }
  return cells;
}

struct ParamErrors {
  double th = 0.0, rh = 0.0, a_inf = 0.0, a0 = 0.0, am = 0.0, an = 0.0;
};

ParamErrors abs_errors(const ParamVector& hat, const ParamVector& truth) {
  const int n = truth.n();
  ParamErrors e;
  e.th = std::abs(hat.theta - truth.theta);
  e.rh = std::abs(hat.rho - truth.rho);
  e.a_inf = (hat.alpha - truth.alpha).cwiseAbs().maxCoeff();
  e.a0 = std::abs(hat.alpha[0] - truth.alpha[0]);
  e.am = std::abs(hat.alpha[n / 2 - 1] - truth.alpha[n / 2 - 1]);
  e.an = std::abs(hat.alpha[n - 1] - truth.alpha[n - 1]);
  return e;
}

void rethrow_if(bool fatal) {
  if (fatal)
    throw Error(ErrorKind::InvalidDesign,
                "unexpected non-statistical failure inside a replication");
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path);
  return out;
}

}  // namespace

double ThetaSpec::resolve(int n) const {
  if (n < 2) throw Error(ErrorKind::InvalidDesign, "theta spec needs n >= 2");
  switch (kind) {
    case Kind::Constant: return value;
    case Kind::LogFrac: return -std::log(double(n)) / value;
    case Kind::LogLog: return -std::log(std::log(double(n)));
  }
  throw Error(ErrorKind::InvalidDesign, "bad theta spec");
}

std::string ThetaSpec::label() const {
  switch (kind) {
    case Kind::Constant: return fmt_short(value);
    case Kind::LogFrac: return "-log(n)/" + fmt_short(value);
    case Kind::LogLog: return "-log(log(n))";
  }
  return "?";
}

ThetaSpec ThetaSpec::parse(const std::string& text) {
  const std::string s = trimmed(text);
  if (s == "-log(log(n))" || s == "loglog") return log_log();
  const std::string prefix = "-log(n)/";
  if (s.rfind(prefix, 0) == 0) {
    try {
      std::size_t used = 0;
      const double c = std::stod(s.substr(prefix.size()), &used);
      if (used == s.size() - prefix.size() && c != 0.0 && std::isfinite(c))
        return log_frac(c);
    } catch (const std::exception&) {
    }
    throw Error(ErrorKind::ParseError, "bad theta spec divisor in '" + s + "'");
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size() && std::isfinite(v)) return constant(v);
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::ParseError, "cannot parse theta spec '" + s + "'");
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open config " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("config JSON: ") + e.what());
  }
  ExperimentConfig cfg;
  try {
    if (j.contains("n_values")) cfg.n_values = j["n_values"].get<std::vector<int>>();
    if (j.contains("theta_specs")) {
      cfg.theta_specs.clear();
      for (const auto& item : j["theta_specs"]) {
        if (item.is_number())
          cfg.theta_specs.push_back(ThetaSpec::constant(item.get<double>()));
        else
          cfg.theta_specs.push_back(ThetaSpec::parse(item.get<std::string>()));
      }
    }
    if (j.contains("rho")) cfg.rho = j["rho"].get<double>();
    if (j.contains("replications")) cfg.replications = j["replications"].get<int>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("outputs")) cfg.outputs = j["outputs"].get<std::string>();
    if (j.contains("estimators")) {
      cfg.run_tdre = cfg.run_mle = false;
      for (const auto& e : j["estimators"]) {
        const std::string name = e.get<std::string>();
        if (name == "tdre")
          cfg.run_tdre = true;
        else if (name == "mle")
          cfg.run_mle = true;
        else
          throw Error(ErrorKind::ParseError, "unknown estimator '" + name + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("config JSON: ") + e.what());
  }
  if (cfg.theta_specs.empty() || cfg.n_values.empty())
    throw Error(ErrorKind::InvalidDesign, "config needs n_values and theta_specs");
  if (cfg.replications < 1)
    throw Error(ErrorKind::InvalidDesign, "replications must be >= 1");
  return cfg;
}

std::vector<ErrorCell> run_error_table(const ExperimentConfig& cfg) {
  const auto cells = grid(cfg);
  std::vector<ErrorCell> out;

  struct RepOut {
    bool tdre_ok = false, mle_ok = false, fatal = false;
    ParamErrors tdre, mle;
  };

  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    const CellDesign& cell = cells[ci];
    std::vector<RepOut> slots(cfg.replications);

#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < cfg.replications; ++r) {
      RepOut& slot = slots[r];
      try {
        const Digraph g = sample_graph(cell.truth, rep_seed(cfg, ci, r));
        const DyadTally t = tally(g);
        if (cfg.run_tdre) {
          try {
            slot.tdre = abs_errors(estimate_all(t).params(), cell.truth);
            slot.tdre_ok = true;
          } catch (const Error&) {
          }
        }
        if (cfg.run_mle) {
          try {
            slot.mle = abs_errors(fit_mle(t).theta_tilde, cell.truth);
            slot.mle_ok = true;
          } catch (const Error&) {
          }
        }
      } catch (...) {
        slot.fatal = true;
      }
    }

    for (int which = 0; which < 2; ++which) {
      const bool is_mle = which == 1;
      if ((is_mle && !cfg.run_mle) || (!is_mle && !cfg.run_tdre)) continue;
      ErrorCell ec;
      ec.n = cell.n;
      ec.theta_label = cell.spec.label();
      ec.theta = cell.theta;
      ec.rho = cfg.rho;
      ec.estimator = is_mle ? "mle" : "tdre";
      ec.replications = cfg.replications;
      for (const RepOut& slot : slots) {
        rethrow_if(slot.fatal);
        const bool ok = is_mle ? slot.mle_ok : slot.tdre_ok;
        if (!ok) {
          ++ec.degenerate;
          continue;
        }
        const ParamErrors& e = is_mle ? slot.mle : slot.tdre;
        ++ec.successes;
        ec.mae_theta += e.th;
        ec.mae_rho += e.rh;
        ec.mae_alpha_inf += e.a_inf;
        ec.mae_alpha_first += e.a0;
        ec.mae_alpha_mid += e.am;
        ec.mae_alpha_last += e.an;
      }
      if (ec.successes > 0) {
        const double m = ec.successes;
        ec.mae_theta /= m;
        ec.mae_rho /= m;
        ec.mae_alpha_inf /= m;
        ec.mae_alpha_first /= m;
        ec.mae_alpha_mid /= m;
        ec.mae_alpha_last /= m;
      }
      out.push_back(std::move(ec));
    }
  }
  return out;
}

std::vector<TimingCell> run_timing(const ExperimentConfig& cfg) {
  if (!cfg.run_tdre || !cfg.run_mle)
    throw Error(ErrorKind::InvalidDesign, "timing needs both estimators enabled");
  const auto cells = grid(cfg);
  const int reps = std::max(cfg.replications, 10);
  std::vector<TimingCell> out;

  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    const CellDesign& cell = cells[ci];
    TimingCell tc;
    tc.n = cell.n;
    tc.theta_label = cell.spec.label();
    tc.repetitions = reps;
    double tdre_sum = 0.0, mle_sum = 0.0;
    int mle_ok = 0;
    for (int r = 0; r < reps; ++r) {
      const Digraph g = sample_graph(cell.truth, rep_seed(cfg, ci, r));
      const double t0 = wall_seconds();
      const DyadTally t = tally(g);
      const double t1 = wall_seconds();
      try {
        (void)estimate_all(t);
      } catch (const Error&) {
        // degenerate draw: the pass still measures the attempted pipeline
      }
      const double t2 = wall_seconds();
      tdre_sum += t2 - t0;
      try {
        (void)fit_mle(t);
        mle_sum += (wall_seconds() - t2) + (t1 - t0);
        ++mle_ok;
      } catch (const Error&) {
        ++tc.mle_failures;
      }
    }
    tc.tdre_seconds = tdre_sum / reps;
    tc.mle_seconds = mle_ok ? mle_sum / mle_ok : 0.0;
    out.push_back(std::move(tc));
  }
  return out;
}

CoverageResult run_coverage(const ExperimentConfig& cfg, double level) {
  if (!(level > 0.0 && level < 1.0))
    throw Error(ErrorKind::InvalidDesign, "confidence level must lie in (0,1)");
  // single-cell harness: the first n and first theta spec drive the run
  const CellDesign cell = grid(cfg).front();
  const int n = cell.n;
  const double z = normal_quantile(0.5 * (1.0 + level));
  const int i0 = 0, im = n / 2 - 1, in_ = n - 1;

  struct RepOut {
    bool ok = false, fatal = false;
    bool cov[8] = {false, false, false, false, false, false, false, false};
    double z_theta = 0.0, z_rho = 0.0;
  };
  std::vector<RepOut> slots(cfg.replications);

#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < cfg.replications; ++r) {
    RepOut& slot = slots[r];
    try {
      const Digraph g = sample_graph(cell.truth, rep_seed(cfg, 0, r));
      const EstimateReport est = estimate_all(tally(g));
      const AsymptoticTable tab = plug_in(est);
      const double se_t = std::sqrt(tab.sigma_theta2);
      const double se_r = std::sqrt(tab.sigma_rho2);
      slot.z_theta = (est.theta_hat - cell.truth.theta - tab.theta_star) / se_t;
      slot.z_rho = (est.rho_hat - cell.truth.rho - tab.rho_star) / se_r;
      slot.cov[0] = std::abs(slot.z_rho) <= z;
      slot.cov[1] = std::abs(slot.z_theta) <= z;
      const int idx[3] = {i0, im, in_};
      for (int k = 0; k < 3; ++k) {
        const int i = idx[k];
        slot.cov[2 + k] = std::abs(est.alpha_hat[i] - cell.truth.alpha[i]) <=
                          z * std::sqrt(tab.sigma_alpha2[i]);
        slot.cov[5 + k] = std::abs(est.beta_hat[i] - cell.truth.beta[i]) <=
                          z * std::sqrt(tab.sigma_beta2[i]);
      }
      slot.ok = true;
    } catch (const Error&) {
    } catch (...) {
      slot.fatal = true;
    }
  }

  CoverageResult res;
  res.n = n;
  res.level = level;
  res.replications = cfg.replications;
  static const char* names[8] = {"rho",        "theta",      "alpha_first",
                                 "alpha_mid",  "alpha_last", "beta_first",
                                 "beta_mid",   "beta_last"};
  for (const char* name : names) res.covered[name] = 0;
  for (const RepOut& slot : slots) {
    rethrow_if(slot.fatal);
    if (!slot.ok) continue;
    ++res.successes;
    for (int k = 0; k < 8; ++k) res.covered[names[k]] += slot.cov[k] ? 1 : 0;
    res.z_theta.push_back(slot.z_theta);
    res.z_rho.push_back(slot.z_rho);
  }
  return res;
}

CalibrationResult run_test_calibration(const ExperimentConfig& cfg, double level) {
  const CellDesign cell = grid(cfg).front();

  struct RepOut {
    bool ok = false, fatal = false, reject = false;
  };
  std::vector<RepOut> slots(cfg.replications);

#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < cfg.replications; ++r) {
    RepOut& slot = slots[r];
    try {
      const Digraph g = sample_graph(cell.truth, rep_seed(cfg, 0, r));
      const EstimateReport est = estimate_all(tally(g));
      const AsymptoticTable tab = plug_in(est);
      slot.reject = test_reciprocity_from(est, tab, level).reject;
      slot.ok = true;
    } catch (const Error&) {
    } catch (...) {
      slot.fatal = true;
    }
  }

  CalibrationResult res;
  res.n = cell.n;
  res.replications = cfg.replications;
  for (const RepOut& slot : slots) {
    rethrow_if(slot.fatal);
    if (!slot.ok) continue;
    ++res.successes;
    res.rejections += slot.reject ? 1 : 0;
  }
  return res;
}

void write_error_csv(const std::vector<ErrorCell>& cells, const std::string& path) {
  auto out = open_out(path);
  out << "n,theta,theta_value,rho,estimator,replications,successes,degenerate,"
         "mae_theta,mae_rho,mae_alpha_inf,mae_alpha_first,mae_alpha_mid,"
         "mae_alpha_last\n";
  for (const ErrorCell& c : cells) {
    out << c.n << ',' << c.theta_label << ',' << fmt_full(c.theta) << ','
        << fmt_short(c.rho) << ',' << c.estimator << ',' << c.replications << ','
        << c.successes << ',' << c.degenerate << ',' << fmt_full(c.mae_theta) << ','
        << fmt_full(c.mae_rho) << ',' << fmt_full(c.mae_alpha_inf) << ','
        << fmt_full(c.mae_alpha_first) << ',' << fmt_full(c.mae_alpha_mid) << ','
        << fmt_full(c.mae_alpha_last) << '\n';
  }
}

void write_timing_csv(const std::vector<TimingCell>& cells, const std::string& path) {
  auto out = open_out(path);
  out << "n,theta,repetitions,tdre_seconds,mle_seconds,mle_failures\n";
  for (const TimingCell& c : cells) {
    out << c.n << ',' << c.theta_label << ',' << c.repetitions << ','
        << fmt_full(c.tdre_seconds) << ',' << fmt_full(c.mle_seconds) << ','
        << c.mle_failures << '\n';
  }
}

void write_coverage_json(const CoverageResult& res, const std::string& path) {
  nlohmann::json j;
  j["n"] = res.n;
  j["level"] = res.level;
  j["replications"] = res.replications;
  j["successes"] = res.successes;
  j["covered"] = res.covered;
  nlohmann::json rates;
  for (const auto& [name, count] : res.covered)
    rates[name] = res.successes ? double(count) / res.successes : 0.0;
  j["coverage"] = std::move(rates);
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

void write_residuals_csv(const CoverageResult& res, const std::string& path) {
  auto out = open_out(path);
  out << "z_theta,z_rho\n";
  for (std::size_t i = 0; i < res.z_theta.size(); ++i)
    out << fmt_full(res.z_theta[i]) << ',' << fmt_full(res.z_rho[i]) << '\n';
}

}  // namespace tdre
