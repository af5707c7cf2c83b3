#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "tdre/graph.hpp"
#include "tdre/model.hpp"
#include "tdre/rng.hpp"
#include "tdre/sample.hpp"

using namespace tdre;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("tdre-cli-" + std::to_string(::getpid()) + "-" +
            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const char* name) const { return (path / name).string(); }
};

std::string slurp(const std::string& p) {
  std::ifstream f(p);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct RunResult {
  int exit_code;
  std::string out, err;
};

// drives the installed binary exactly as a user would
RunResult run_cli(const TempDir& dir, const std::string& args) {
  const char* bin = std::getenv("TDRE_CLI");
  REQUIRE_MESSAGE(bin != nullptr, "TDRE_CLI must point at the cli binary");
  const std::string out = dir.file("stdout.txt"), err = dir.file("stderr.txt");
  const std::string cmd = std::string(bin) + " " + args + " >" + out + " 2>" + err;
  const int rc = std::system(cmd.c_str());
  return {WEXITSTATUS(rc), slurp(out), slurp(err)};
}

}  // namespace

TEST_CASE("edge lists round-trip through write and parse") {
  TempDir dir;
  SequentialRng r(CounterRng(606));
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 2 + 2 * int(r.uniform() * 19);  // even 2..40
    ParamVector p = linear_design(n, 2 * r.uniform() - 0.5, r.uniform() - 1.2);
    Digraph g = sample_graph(p, 4000 + rep);
    const std::string path = dir.file("g.csv");
    write_edge_list(g, path);
    CHECK(parse_edge_list(path, n) == g);
  }
}

TEST_CASE("a large synthetic network survives the round trip") {
  TempDir dir;
  const int n = 4077;
  ParamVector p = linear_design(n - 1, 0.8, -4.5);  // design size must be even
  p.alpha.conservativeResize(n);
  p.beta.conservativeResize(n);
  p.alpha[n - 1] = 0;
  p.beta[n - 1] = 0;
  Digraph g = sample_graph_sparse(p, 31415);
  REQUIRE(g.n == n);
  const std::string path = dir.file("big.csv");
  write_edge_list(g, path);
  CHECK(parse_edge_list(path, n) == g);
}

TEST_CASE("parse errors carry the line number") {
  TempDir dir;
  const std::string path = dir.file("bad.csv");
  {
    std::ofstream f(path);
    f << "src,dst\n0,1\n1,banana\n";
  }
  try {
    parse_edge_list(path);
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ParseError);
    CHECK(e.detail() == 3);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }

  {
    std::ofstream f(path);
    f << "src,dst\n0,1\n2,2\n";
  }
  CHECK_THROWS_AS(parse_edge_list(path), Error);

  {
    std::ofstream f(path);
    f << "src,dst\n0,1\n3,4\n0,1\n";
  }
  try {
    parse_edge_list(path);
    FAIL("expected DuplicateEdge");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DuplicateEdge);
    CHECK(e.detail() == 4);  // the repeated line, not the first occurrence
  }
}

TEST_CASE("cli: simulate then estimate") {
  TempDir dir;
  const std::string graph = dir.file("g.csv");
  RunResult sim = run_cli(dir, "simulate --n 200 --theta -0.5 --rho 0.5 --seed 42 --output " + graph);
  CHECK(sim.exit_code == 0);

  const std::string report = dir.file("est.json");
  RunResult est = run_cli(dir, "estimate --input " + graph + " --variances --output " + report);
  CHECK(est.exit_code == 0);
  json j = json::parse(slurp(report));
  CHECK(j["n"] == 200);
  CHECK(std::abs(double(j["theta_hat"]) - (-0.5)) < 0.15);
  CHECK(std::abs(double(j["rho_hat"]) - 0.5) < 0.2);
  CHECK(j.contains("asymptotics"));
  CHECK(j["asymptotics"]["source"] == "plugin");

  // the simulated file replays the library sampler exactly
  Digraph g = parse_edge_list(graph);
  CHECK(g == sample_graph(linear_design(200, 0.5, -0.5), 42));
}

TEST_CASE("cli: deterministic given a seed") {
  TempDir dir;
  RunResult a = run_cli(dir, "simulate --n 60 --theta -0.3 --rho 0.2 --seed 7");
  RunResult b = run_cli(dir, "simulate --n 60 --theta -0.3 --rho 0.2 --seed 7");
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("src,dst", 0) == 0);
}

TEST_CASE("cli: usage and data errors exit 1") {
  TempDir dir;
  CHECK(run_cli(dir, "").exit_code == 1);                  // no subcommand
  CHECK(run_cli(dir, "simulate --n 40").exit_code == 1);   // --seed is mandatory
  CHECK(run_cli(dir, "--help").exit_code == 0);

  const std::string bad = dir.file("bad.csv");
  {
    std::ofstream f(bad);
    f << "src,dst\n0,0\n";
  }
  RunResult r = run_cli(dir, "estimate --input " + bad);
  CHECK(r.exit_code == 1);
  json j = json::parse(r.out);
  CHECK(j["error"] == "self-loop");

  CHECK(run_cli(dir, "estimate --input " + dir.file("missing.csv")).exit_code == 1);
}

TEST_CASE("cli: degeneracy exits 2") {
  TempDir dir;
  const std::string graph = dir.file("sparse.csv");
  REQUIRE(run_cli(dir, "simulate --n 200 --theta -3.5 --rho 0.3 --seed 3 --output " + graph)
              .exit_code == 0);
  RunResult r = run_cli(dir, "estimate --input " + graph);
  CHECK(r.exit_code == 2);
  json j = json::parse(r.out);
  CHECK(j["error"] == "degenerate-counts");
  CHECK(j.contains("nodes"));

  // an over-aggressive filter empties gamma
  RunResult a = run_cli(dir, "analyze --input " + graph + " --min-in 300 --min-out 300");
  CHECK(a.exit_code == 2);
  CHECK(json::parse(a.out)["error"] == "empty-filter");
}

TEST_CASE("cli: analyze flags planted reciprocity on a sparse graph") {
  TempDir dir;
  const std::string graph = dir.file("planted.csv");
  REQUIRE(run_cli(dir, "simulate --n 1000 --theta -4.2 --rho 1.5 --seed 99 --output " + graph)
              .exit_code == 0);
  RunResult r = run_cli(dir, "analyze --input " + graph);
  CHECK(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(int(j["gamma_size"]) < 1000);  // thresholds really dropped nodes
  CHECK(int(j["gamma_size"]) > 100);
  CHECK(j["reciprocity_test"]["reject"] == true);
  CHECK(double(j["reciprocity_test"]["p_value"]) < 0.05);
  CHECK(j["alpha_histogram"]["bin_counts"].size() == 20);
}

TEST_CASE("cli: mle and tests run end to end") {
  TempDir dir;
  const std::string graph = dir.file("g.csv");
  REQUIRE(run_cli(dir, "simulate --n 150 --theta -0.4 --rho 0.6 --seed 5 --output " + graph)
              .exit_code == 0);

  RunResult m = run_cli(dir, "mle --input " + graph);
  CHECK(m.exit_code == 0);
  json jm = json::parse(m.out);
  CHECK(jm["converged"] == true);
  CHECK(double(jm["grad_norm"]) <= 1e-8);

  RunResult t = run_cli(dir, "test-reciprocity --input " + graph + " --level 0.01");
  CHECK(t.exit_code == 0);
  json jt = json::parse(t.out);
  CHECK(jt["level"] == 0.01);
  CHECK(jt["reject"] == true);  // rho = 0.6 at n = 150 is unmissable

  RunResult e = run_cli(dir, "test-equality --input " + graph + " --indices 0 1 --kind beta");
  CHECK(e.exit_code == 0);
  CHECK(json::parse(e.out)["name"] == "beta-equality");

  RunResult c = run_cli(dir, "compare --input-a " + graph + " --input-b " + graph);
  CHECK(c.exit_code == 0);
  CHECK(double(json::parse(c.out)["statistic"]) == 0.0);
}

TEST_CASE("cli: bench writes the suite files") {
  TempDir dir;
  const std::string cfg = dir.file("cfg.json");
  {
    std::ofstream f(cfg);
    f << R"({"n_values":[80],"theta_specs":[-0.4],"rho":0.5,"replications":10,
             "estimators":["tdre"]})";
  }
  const std::string outdir = dir.file("suite");
  RunResult r = run_cli(dir, "bench --config " + cfg + " --seed 11 --out-dir " + outdir);
  CHECK(r.exit_code == 0);
  for (const char* f : {"errors.csv", "coverage.json", "residuals.csv", "calibration.json"}) {
    CHECK_MESSAGE(fs::exists(fs::path(outdir) / f), f);
  }
  // rerun reproduces identical non-timing outputs
  const std::string outdir2 = dir.file("suite2");
  REQUIRE(run_cli(dir, "bench --config " + cfg + " --seed 11 --out-dir " + outdir2).exit_code ==
          0);
  for (const char* f : {"errors.csv", "coverage.json", "residuals.csv", "calibration.json"}) {
    CHECK(slurp((fs::path(outdir) / f).string()) == slurp((fs::path(outdir2) / f).string()));
  }
}
