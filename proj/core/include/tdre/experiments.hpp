#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tdre/model.hpp"

namespace tdre {

/** Density-parameter grid entry: constant, -log(n)/c, or -log(log n). */
struct ThetaSpec {
  enum class Kind { Constant, LogFrac, LogLog };
  Kind kind = Kind::Constant;
  double value = 0.0;  // the constant, or c in -log(n)/c

  double resolve(int n) const;
  std::string label() const;

  static ThetaSpec constant(double v) { return {Kind::Constant, v}; }
  static ThetaSpec log_frac(double c) { return {Kind::LogFrac, c}; }
  static ThetaSpec log_log() { return {Kind::LogLog, 0.0}; }
  static ThetaSpec parse(const std::string& text);
};

struct ExperimentConfig {
  std::vector<int> n_values{200, 300, 500};
  std::vector<ThetaSpec> theta_specs{ThetaSpec::constant(0.0)};
  double rho = 0.5;
  int replications = 200;
  std::uint64_t seed = 1;
  bool run_tdre = true;
  bool run_mle = false;
  std::string outputs;  // directory; empty = no files

  static ExperimentConfig from_json_file(const std::string& path);
};

struct ErrorCell {
  int n = 0;
  std::string theta_label;
  double theta = 0.0;
  double rho = 0.0;
  std::string estimator;  // "tdre" or "mle"
  int replications = 0;
  int successes = 0;
  int degenerate = 0;
  double mae_theta = 0.0;
  double mae_rho = 0.0;
  double mae_alpha_inf = 0.0;  // mean over reps of ||alpha_hat - alpha||_inf
  double mae_alpha_first = 0.0, mae_alpha_mid = 0.0, mae_alpha_last = 0.0;
};

std::vector<ErrorCell> run_error_table(const ExperimentConfig& cfg);

struct TimingCell {
  int n = 0;
  std::string theta_label;
  int repetitions = 0;
  double tdre_seconds = 0.0;  // means
  double mle_seconds = 0.0;
  int mle_failures = 0;
};

std::vector<TimingCell> run_timing(const ExperimentConfig& cfg);

struct CoverageResult {
  int n = 0;
  double level = 0.0;
  int replications = 0;
  int successes = 0;
  // parameter name -> covered count; names: rho, theta, alpha_first,
  // alpha_mid, alpha_last, beta_first, beta_mid, beta_last
  std::map<std::string, int> covered;
  std::vector<double> z_theta, z_rho;  // standardized residuals for QQ
};

CoverageResult run_coverage(const ExperimentConfig& cfg, double level = 0.95);

/** Reciprocity-test rejection rate at the config's design (size when rho=0). */
struct CalibrationResult {
  int n = 0;
  int replications = 0;
  int successes = 0;
  int rejections = 0;
  double rate() const { return successes ? double(rejections) / successes : 0.0; }
};

CalibrationResult run_test_calibration(const ExperimentConfig& cfg,
                                       double level = 0.05);

// CSV / JSON emission (timing kept out of the deterministic files)
void write_error_csv(const std::vector<ErrorCell>& cells, const std::string& path);
void write_timing_csv(const std::vector<TimingCell>& cells, const std::string& path);
void write_coverage_json(const CoverageResult& res, const std::string& path);
void write_residuals_csv(const CoverageResult& res, const std::string& path);

}  // namespace tdre
