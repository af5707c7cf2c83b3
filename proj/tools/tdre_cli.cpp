#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tdre/asymptotics.hpp"
#include "tdre/estimator.hpp"
#include "tdre/experiments.hpp"
#include "tdre/inference.hpp"
#include "tdre/mle.hpp"
#include "tdre/report.hpp"
#include "tdre/sample.hpp"
#include "tdre/tally.hpp"

namespace {

using nlohmann::json;
using namespace tdre;

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::DegenerateCounts:
    case ErrorKind::EmptyFilter:
    case ErrorKind::ZeroMu:
    case ErrorKind::NotConverged:
    case ErrorKind::Diverged:
    case ErrorKind::SingularCovariance:
      return 2;
    default:
      return 1;
  }
}

void emit(const json& j, const std::string& output) {
  if (output.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    save_json(j, output);
  }
}

CountMethod method_from(const std::string& name) {
  if (name == "dense") return CountMethod::Dense;
  if (name == "sparse") return CountMethod::Sparse;
  return CountMethod::Auto;
}

json histogram_json(const Vector& values, const std::vector<int>& keep, int bins) {
  std::vector<double> v;
  v.reserve(keep.size());
  for (int i : keep)
    if (std::isfinite(values[i])) v.push_back(values[i]);
  json out;
  out["count"] = v.size();
  if (v.empty()) {
    out["bin_edges"] = json::array();
    out["bin_counts"] = json::array();
    return out;
  }
  double lo = v[0], hi = v[0];
  for (double x : v) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  if (hi <= lo) hi = lo + 1e-12;
  std::vector<double> edges(bins + 1);
  std::vector<int> counts(bins, 0);
  for (int b = 0; b <= bins; ++b) edges[b] = lo + (hi - lo) * b / bins;
  for (double x : v) {
    int b = int((x - lo) / (hi - lo) * bins);
    if (b == bins) b = bins - 1;
    counts[b]++;
  }
  out["bin_edges"] = edges;
  out["bin_counts"] = counts;
  return out;
}

struct CommonOpts {
  std::string input, output;
  int nodes = 0;
};

Digraph load_graph(const CommonOpts& c) { return parse_edge_list(c.input, c.nodes); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"triple-dyad ratio estimation for directed networks"};
  app.require_subcommand(1);

  std::string output;
  app.add_option("--output", output, "write the JSON report here instead of stdout")
      ->capture_default_str();

  // ------------------------------------------------------------- simulate
  auto* sim = app.add_subcommand("simulate", "sample a graph and write its edge list");
  int sim_n = 0;
  double sim_theta = 0.0, sim_rho = 0.0;
  std::uint64_t sim_seed = 0;
  std::string sim_params, sim_sampler = "dense";
  sim->add_option("--n", sim_n, "nodes (piecewise-linear design)");
  sim->add_option("--theta", sim_theta, "density parameter for the design");
  sim->add_option("--rho", sim_rho, "reciprocity parameter for the design");
  sim->add_option("--params", sim_params, "JSON parameter file (overrides --n/--theta/--rho)");
  sim->add_option("--seed", sim_seed, "RNG seed")->required();
  sim->add_option("--sampler", sim_sampler, "dense|sparse")
      ->check(CLI::IsMember({"dense", "sparse"}))
      ->capture_default_str();

  // ------------------------------------------------------------- estimate
  auto* est_cmd = app.add_subcommand("estimate", "closed-form ratio estimates");
  CommonOpts est_c;
  std::string est_method = "auto";
  bool est_global = false, est_variances = false;
  est_cmd->add_option("--input", est_c.input, "edge-list CSV")->required();
  est_cmd->add_option("--nodes", est_c.nodes, "node count (default: 1 + max index)");
  est_cmd->add_option("--method", est_method, "dense|sparse|auto")
      ->check(CLI::IsMember({"dense", "sparse", "auto"}))
      ->capture_default_str();
  est_cmd->add_flag("--global-only", est_global, "theta and rho only");
  est_cmd->add_flag("--variances", est_variances, "attach the plug-in variance/bias table");

  // ------------------------------------------------------------------ mle
  auto* mle_cmd = app.add_subcommand("mle", "maximum-likelihood baseline");
  CommonOpts mle_c;
  MleOptions mle_opts;
  bool mle_cold = false;
  mle_cmd->add_option("--input", mle_c.input, "edge-list CSV")->required();
  mle_cmd->add_option("--nodes", mle_c.nodes, "node count (default: 1 + max index)");
  mle_cmd->add_option("--tol", mle_opts.tol, "score-equation tolerance")->capture_default_str();
  mle_cmd->add_option("--max-iter", mle_opts.max_iter, "coordinate sweeps")->capture_default_str();
  mle_cmd->add_flag("--no-warm-start", mle_cold, "start from zeros instead of the ratio estimate");

  // ------------------------------------------------------- test-reciprocity
  auto* rec_cmd = app.add_subcommand("test-reciprocity", "H0: rho = 0 with bias correction");
  CommonOpts rec_c;
  double rec_level = 0.05;
  rec_cmd->add_option("--input", rec_c.input, "edge-list CSV")->required();
  rec_cmd->add_option("--nodes", rec_c.nodes, "node count (default: 1 + max index)");
  rec_cmd->add_option("--level", rec_level, "test level")->capture_default_str();

  // ---------------------------------------------------------- test-equality
  auto* eq_cmd = app.add_subcommand("test-equality", "equality of degree parameters");
  CommonOpts eq_c;
  std::vector<int> eq_indices;
  std::string eq_kind = "alpha";
  double eq_level = 0.05;
  eq_cmd->add_option("--input", eq_c.input, "edge-list CSV")->required();
  eq_cmd->add_option("--nodes", eq_c.nodes, "node count (default: 1 + max index)");
  eq_cmd->add_option("--indices", eq_indices, "node indices to compare")
      ->required()
      ->expected(2, -1);
  eq_cmd->add_option("--kind", eq_kind, "alpha|beta|alpha-beta")
      ->check(CLI::IsMember({"alpha", "beta", "alpha-beta"}))
      ->capture_default_str();
  eq_cmd->add_option("--level", eq_level, "test level")->capture_default_str();

  // ---------------------------------------------------------------- compare
  auto* cmp_cmd = app.add_subcommand("compare", "reciprocity difference between two graphs");
  std::string cmp_a, cmp_b;
  double cmp_level = 0.05;
  cmp_cmd->add_option("--input-a", cmp_a, "first edge-list CSV")->required();
  cmp_cmd->add_option("--input-b", cmp_b, "second edge-list CSV")->required();
  cmp_cmd->add_option("--level", cmp_level, "test level")->capture_default_str();

  // ---------------------------------------------------------------- analyze
  auto* ana_cmd = app.add_subcommand("analyze", "filtered estimation report for real data");
  CommonOpts ana_c;
  int ana_min_in = 5, ana_min_out = 5, ana_bins = 20;
  double ana_level = 0.05;
  ana_cmd->add_option("--input", ana_c.input, "edge-list CSV")->required();
  ana_cmd->add_option("--nodes", ana_c.nodes, "node count (default: 1 + max index)");
  ana_cmd->add_option("--min-in", ana_min_in, "in-degree threshold")->capture_default_str();
  ana_cmd->add_option("--min-out", ana_min_out, "out-degree threshold")->capture_default_str();
  ana_cmd->add_option("--level", ana_level, "reciprocity-test level")->capture_default_str();
  ana_cmd->add_option("--bins", ana_bins, "histogram bins for alpha/beta")->capture_default_str();

  // ------------------------------------------------------------------ bench
  auto* bench_cmd = app.add_subcommand("bench", "Monte Carlo suites from a JSON config");
  std::string bench_config, bench_dir;
  std::uint64_t bench_seed = 0;
  bool bench_timing = false;
  bench_cmd->add_option("--config", bench_config, "experiment config (JSON)")->required();
  bench_cmd->add_option("--seed", bench_seed, "RNG seed (overrides the config)")->required();
  bench_cmd->add_option("--out-dir", bench_dir, "output directory (overrides the config)");
  bench_cmd->add_flag("--timing", bench_timing, "also run the wall-clock comparison");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints usage/help to the right stream
    return e.get_exit_code() == 0 ? 0 : 1;
  }

  try {
    if (sim->parsed()) {
      ParamVector p;
      if (!sim_params.empty()) {
        p = load_params(sim_params);
      } else {
        if (sim_n < 2)
          throw Error(ErrorKind::InvalidDesign, "simulate needs --params or --n >= 2");
        p = linear_design(sim_n, sim_rho, sim_theta);
      }
      const Digraph g = sim_sampler == "sparse" ? sample_graph_sparse(p, sim_seed)
                                                : sample_graph(p, sim_seed);
      if (output.empty()) {
        std::cout << "src,dst\n";
        for (auto [s, d] : g.edges) std::cout << s << ',' << d << '\n';
      } else {
        write_edge_list(g, output);
      }
      std::cerr << "sampled n=" << g.n << " edges=" << g.edge_count() << " seed=" << sim_seed
                << " sampler=" << sim_sampler << "\n";
      return 0;
    }

    if (est_cmd->parsed()) {
      const Digraph g = load_graph(est_c);
      EstimateOptions opts;
      opts.method = method_from(est_method);
      opts.global_only = est_global;
      const EstimateReport est = estimate_all(tally(g), opts);
      json j = to_json(est);
      if (est_variances) j["asymptotics"] = to_json(plug_in(est));
      emit(j, output);
      std::cerr << "n=" << est.n << " theta_hat=" << est.theta_hat
                << " rho_hat=" << est.rho_hat << " method=" << est.method << "\n";
      return 0;
    }

    if (mle_cmd->parsed()) {
      const Digraph g = load_graph(mle_c);
      mle_opts.warm_start = !mle_cold;
      const MleResult m = fit_mle(tally(g), mle_opts);
      emit(to_json(m), output);
      std::cerr << "theta_tilde=" << m.theta_tilde.theta << " rho_tilde=" << m.theta_tilde.rho
                << " sweeps=" << m.iterations << " grad=" << m.grad_norm << "\n";
      return 0;
    }

    if (rec_cmd->parsed()) {
      const TestReport r = test_reciprocity(load_graph(rec_c), rec_level);
      emit(to_json(r), output);
      std::cerr << r.name << ": statistic=" << r.statistic << " p=" << r.p_value
                << (r.reject ? " (reject)" : " (no reject)") << "\n";
      return 0;
    }

    if (eq_cmd->parsed()) {
      const TestReport r = test_alpha_equality(load_graph(eq_c), eq_indices, eq_level, eq_kind);
      emit(to_json(r), output);
      std::cerr << r.name << ": statistic=" << r.statistic << " p=" << r.p_value
                << (r.reject ? " (reject)" : " (no reject)") << "\n";
      return 0;
    }

    if (cmp_cmd->parsed()) {
      const Digraph ga = parse_edge_list(cmp_a);
      const Digraph gb = parse_edge_list(cmp_b);
      const TestReport r = compare_graphs(ga, gb, cmp_level);
      emit(to_json(r), output);
      std::cerr << r.name << ": statistic=" << r.statistic << " p=" << r.p_value
                << (r.reject ? " (reject)" : " (no reject)") << "\n";
      return 0;
    }

    if (ana_cmd->parsed()) {
      const Digraph g = load_graph(ana_c);
      const DyadTally t = tally(g);
      const std::vector<int> gamma = gamma_filter(t, ana_min_out, ana_min_in);
      const EstimateReport est = estimate_all_filtered(t, gamma);

      // plug-in table over the retained nodes only
      ParamVector sub;
      sub.rho = est.rho_hat;
      sub.theta = est.theta_hat;
      sub.alpha.resize(gamma.size());
      sub.beta.resize(gamma.size());
      for (std::size_t k = 0; k < gamma.size(); ++k) {
        sub.alpha[k] = est.alpha_hat[gamma[k]];
        sub.beta[k] = est.beta_hat[gamma[k]];
      }
      EstimateReport sub_est;
      sub_est.n = int(gamma.size());
      sub_est.theta_hat = est.theta_hat;
      sub_est.rho_hat = est.rho_hat;
      sub_est.alpha_hat = sub.alpha;
      sub_est.beta_hat = sub.beta;
      const AsymptoticTable tab = plug_in(sub_est);
      const TestReport rec = test_reciprocity_from(sub_est, tab, ana_level);

      json j;
      j["n"] = g.n;
      j["gamma_size"] = gamma.size();
      j["gamma"] = gamma;
      j["estimate"] = to_json(est);
      j["asymptotics"] = to_json(tab);
      j["reciprocity_test"] = to_json(rec);
      j["alpha_histogram"] = histogram_json(est.alpha_hat, gamma, ana_bins);
      j["beta_histogram"] = histogram_json(est.beta_hat, gamma, ana_bins);
      emit(j, output);
      std::cerr << "|Gamma|=" << gamma.size() << "/" << g.n << " theta_hat=" << est.theta_hat
                << " rho_hat=" << est.rho_hat << " reciprocity p=" << rec.p_value << "\n";
      return 0;
    }

    if (bench_cmd->parsed()) {
      ExperimentConfig cfg = ExperimentConfig::from_json_file(bench_config);
      cfg.seed = bench_seed;
      if (!bench_dir.empty()) cfg.outputs = bench_dir;
      if (cfg.outputs.empty())
        throw Error(ErrorKind::InvalidDesign, "bench needs --out-dir or an outputs entry");
      std::filesystem::create_directories(cfg.outputs);
      const auto dir = std::filesystem::path(cfg.outputs);

      const auto errors = run_error_table(cfg);
      write_error_csv(errors, (dir / "errors.csv").string());
      const CoverageResult cov = run_coverage(cfg);
      write_coverage_json(cov, (dir / "coverage.json").string());
      write_residuals_csv(cov, (dir / "residuals.csv").string());
      const CalibrationResult cal = run_test_calibration(cfg);
      json cal_j{{"n", cal.n},
                 {"replications", cal.replications},
                 {"successes", cal.successes},
                 {"rejections", cal.rejections},
                 {"rate", cal.rate()}};
      save_json(cal_j, (dir / "calibration.json").string());
      if (bench_timing) {
        const auto timing = run_timing(cfg);
        write_timing_csv(timing, (dir / "timing.csv").string());
      }
      json j{{"outputs", cfg.outputs},
             {"cells", errors.size()},
             {"coverage_successes", cov.successes},
             {"calibration_rate", cal.rate()}};
      emit(j, output);
      std::cerr << "suite written to " << cfg.outputs << "\n";
      return 0;
    }
  } catch (const Error& e) {
    emit(error_json(e), output);
    std::cerr << "error (" << error_kind_name(e.kind()) << "): " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
