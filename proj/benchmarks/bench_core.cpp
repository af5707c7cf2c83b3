#include <benchmark/benchmark.h>

#include <cmath>

#include "tdre/asymptotics.hpp"
#include "tdre/estimator.hpp"
#include "tdre/mle.hpp"
#include "tdre/model.hpp"
#include "tdre/sample.hpp"
#include "tdre/tally.hpp"

using namespace tdre;

namespace {

DyadTally fixture(int n, double theta, bool sparse_sampler = false) {
  const ParamVector p = linear_design(n, 0.5, theta);
  return tally(sparse_sampler ? sample_graph_sparse(p, 17) : sample_graph(p, 17));
}

void bm_sample_dense(benchmark::State& state) {
  const int n = int(state.range(0));
  const ParamVector p = linear_design(n, 0.5, -0.4);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_graph(p, seed++));
  state.SetComplexityN(n);
}
BENCHMARK(bm_sample_dense)->Arg(300)->Arg(1000)->Arg(3000)->Complexity();

void bm_sample_sparse(benchmark::State& state) {
  const int n = int(state.range(0));
  const ParamVector p = linear_design(n, 0.5, -std::log(double(n)) / 2.0);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_graph_sparse(p, seed++));
}
BENCHMARK(bm_sample_sparse)->Arg(10000)->Arg(100000);

void bm_tally(benchmark::State& state) {
  const int n = int(state.range(0));
  const ParamVector p = linear_design(n, 0.5, -0.4);
  const Digraph g = sample_graph(p, 17);
  for (auto _ : state) benchmark::DoNotOptimize(tally(g));
}
BENCHMARK(bm_tally)->Arg(1000)->Arg(3000);

void bm_counts_dense(benchmark::State& state) {
  const DyadTally t = fixture(int(state.range(0)), -0.4);
  CountOptions opts;
  opts.method = CountMethod::Dense;
  for (auto _ : state) benchmark::DoNotOptimize(triple_counts(t, opts));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(bm_counts_dense)->Arg(300)->Arg(600)->Arg(1200)->Arg(2400)->Complexity();

void bm_counts_sparse(benchmark::State& state) {
  const int n = int(state.range(0));
  const DyadTally t = fixture(n, -std::log(double(n)) / 2.0, true);
  CountOptions opts;
  opts.method = CountMethod::Sparse;
  opts.diag_only = true;
  for (auto _ : state) benchmark::DoNotOptimize(triple_counts(t, opts));
}
BENCHMARK(bm_counts_sparse)->Arg(2000)->Arg(8000)->Arg(20000);

void bm_estimate_all(benchmark::State& state) {
  const DyadTally t = fixture(int(state.range(0)), 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_all(t));
}
BENCHMARK(bm_estimate_all)->Arg(300)->Arg(500)->Arg(1000);

void bm_variance_table(benchmark::State& state) {
  const ParamVector p = linear_design(int(state.range(0)), 0.5, -0.4);
  const DyadProbTable tab = dyad_probs(p);
  for (auto _ : state) benchmark::DoNotOptimize(variance_table(tab));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(bm_variance_table)->Arg(150)->Arg(300)->Arg(600)->Complexity();

void bm_plug_in(benchmark::State& state) {
  const EstimateReport est = estimate_all(fixture(int(state.range(0)), 0.0));
  for (auto _ : state) benchmark::DoNotOptimize(plug_in(est));
}
BENCHMARK(bm_plug_in)->Arg(300)->Arg(500);

void bm_fit_mle(benchmark::State& state) {
  const DyadTally t = fixture(int(state.range(0)), 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(fit_mle(t));
}
BENCHMARK(bm_fit_mle)->Arg(300)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
