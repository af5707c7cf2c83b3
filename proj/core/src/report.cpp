#include "tdre/report.hpp"

#include <fstream>
#include <vector>

namespace tdre {

namespace {

nlohmann::json vec_json(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Vector vec_from(const nlohmann::json& j) {
  const auto values = j.get<std::vector<double>>();
  if (values.empty()) return Vector();
  return Eigen::Map<const Vector>(values.data(),
                                  static_cast<Eigen::Index>(values.size()));
}

}  // namespace

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::ParseError: return "parse-error";
    case ErrorKind::SelfLoop: return "self-loop";
    case ErrorKind::DuplicateEdge: return "duplicate-edge";
    case ErrorKind::InvalidDesign: return "invalid-design";
    case ErrorKind::InvalidIndices: return "invalid-indices";
    case ErrorKind::DegenerateCounts: return "degenerate-counts";
    case ErrorKind::EmptyFilter: return "empty-filter";
    case ErrorKind::ZeroMu: return "zero-mu";
    case ErrorKind::NotConverged: return "not-converged";
    case ErrorKind::Diverged: return "diverged";
    case ErrorKind::SingularCovariance: return "singular-covariance";
    case ErrorKind::IoError: return "io-error";
  }
  return "unknown";
}

nlohmann::json to_json(const ParamVector& p) {
  return {{"rho", p.rho},
          {"theta", p.theta},
          {"alpha", vec_json(p.alpha)},
          {"beta", vec_json(p.beta)}};
}

nlohmann::json to_json(const EstimateReport& r) {
  nlohmann::json j{{"n", r.n},
                   {"theta_hat", r.theta_hat},
                   {"rho_hat", r.rho_hat},
                   {"method", r.method},
                   {"global_only", r.global_only}};
  if (!r.global_only) {
    j["alpha_hat"] = vec_json(r.alpha_hat);
    j["beta_hat"] = vec_json(r.beta_hat);
  }
  j["theta_terms"] = vec_json(r.theta_terms);
  j["rho_terms"] = vec_json(r.rho_terms);
  if (!r.global_only) {
    j["alpha_terms"] = vec_json(r.alpha_terms);
    j["beta_terms"] = vec_json(r.beta_terms);
  }
  if (!r.skipped_nodes.empty()) j["skipped_nodes"] = r.skipped_nodes;
  return j;
}

nlohmann::json to_json(const AsymptoticTable& t) {
  return {{"n", t.n},
          {"sigma_theta2", t.sigma_theta2},
          {"sigma_rho2", t.sigma_rho2},
          {"sigma_alpha2", vec_json(t.sigma_alpha2)},
          {"sigma_beta2", vec_json(t.sigma_beta2)},
          {"sigma_cross", vec_json(t.sigma_cross)},
          {"theta_star", t.theta_star},
          {"rho_star", t.rho_star},
          {"c_upper", t.c_upper},
          {"c_lower", t.c_lower},
          {"source", t.source}};
}

nlohmann::json to_json(const TestReport& t) {
  nlohmann::json j{{"name", t.name},
                   {"statistic", t.statistic},
                   {"null_distribution", t.null_distribution},
                   {"p_value", t.p_value},
                   {"level", t.level},
                   {"reject", t.reject},
                   {"estimate", t.estimate},
                   {"bias_correction", t.bias_correction},
                   {"std_error", t.std_error}};
  if (t.df > 0) j["df"] = t.df;
  if (t.ci) j["ci"] = {t.ci->first, t.ci->second};
  return j;
}

nlohmann::json to_json(const MleResult& m) {
  return {{"theta_tilde", to_json(m.theta_tilde)},
          {"log_lik", m.log_lik},
          {"iterations", m.iterations},
          {"converged", m.converged},
          {"grad_norm", m.grad_norm}};
}

ParamVector param_vector_from_json(const nlohmann::json& j) {
  try {
    ParamVector p;
    p.rho = j.at("rho").get<double>();
    p.theta = j.at("theta").get<double>();
    p.alpha = vec_from(j.at("alpha"));
    p.beta = vec_from(j.at("beta"));
    if (p.alpha.size() != p.beta.size())
      throw Error(ErrorKind::ParseError, "alpha and beta lengths differ");
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("parameter JSON: ") + e.what());
  }
}

ParamVector load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("parameter JSON: ") + e.what());
  }
  return param_vector_from_json(j);
}

void save_json(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path);
  out << j.dump(2) << '\n';
}

nlohmann::json error_json(const Error& e) {
  nlohmann::json j{{"error", error_kind_name(e.kind())}, {"message", e.what()}};
  if (e.detail() >= 0) j["detail"] = e.detail();
  if (const auto* d = dynamic_cast<const DegenerateError*>(&e))
    j["nodes"] = d->nodes();
  return j;
}

}  // namespace tdre
