#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "pigp/bandit.hpp"
#include "pigp/gp.hpp"
#include "pigp/kernel.hpp"
#include "pigp/rng.hpp"
#include "pigp/testbed.hpp"

namespace {

using namespace pigp;

PointSet random_points(int dim, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  PointSet pts(dim);
  std::vector<double> x(dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (int a = 0; a < dim; ++a) x[a] = rng.uniform01();
    pts.push_back(x);
  }
  return pts;
}

void BM_KernelEval(benchmark::State& state) {
  const KernelSpec kernel(1.5, 0.2, 2);
  const PointSet pts = random_points(2, 2, 11);
  for (auto _ : state)
    benchmark::DoNotOptimize(matern_eval(kernel, pts[0], pts[1]));
}
BENCHMARK(BM_KernelEval);

void BM_GramMatrix(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const KernelSpec kernel(1.5, 0.2, 2);
  const PointSet pts = random_points(2, n, 12);
  for (auto _ : state) benchmark::DoNotOptimize(gram_matrix(kernel, pts));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GramMatrix)->Arg(64)->Arg(128)->Arg(256)->Complexity();

// Cost of growing the regression state one observation at a time; the
// factor update is quadratic per append, cubic for the whole build.
void BM_GpBuild(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const KernelSpec kernel(1.5, 0.2, 2);
  const PointSet pts = random_points(2, n, 13);
  Rng rng(14);
  std::vector<double> y(n);
  for (auto& v : y) v = rng.uniform(-1.0, 1.0);
  for (auto _ : state) {
    GpState gp(kernel, 1.0);
    for (std::size_t i = 0; i < n; ++i) gp.add_observation(pts[i], y[i]);
    benchmark::DoNotOptimize(gp.information_gain());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GpBuild)->Arg(64)->Arg(128)->Arg(256)->Arg(512)->Complexity();

void BM_PosteriorProbe(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const KernelSpec kernel(1.5, 0.2, 2);
  const PointSet pts = random_points(2, n, 15);
  Rng rng(16);
  GpState gp(kernel, 1.0);
  for (std::size_t i = 0; i < n; ++i)
    gp.add_observation(pts[i], rng.uniform(-1.0, 1.0));
  const PointSet probes = random_points(2, 64, 17);
  std::size_t j = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gp.posterior(probes[j]));
    j = (j + 1) % probes.size();
  }
}
BENCHMARK(BM_PosteriorProbe)->Arg(64)->Arg(256);

// One appended observation refreshing the cached mean and variance of
// every arm of a 30 x 30 grid.
void BM_ArmPosteriorAppend(benchmark::State& state) {
  const KernelSpec kernel(1.5, 0.2, 2);
  const PointSet grid = make_grid(2, 30);
  std::vector<std::uint32_t> arms(grid.size());
  for (std::size_t i = 0; i < arms.size(); ++i)
    arms[i] = static_cast<std::uint32_t>(i);
  Rng rng(18);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    state.PauseTiming();
    ArmPosterior post(kernel, 1.0, grid, arms);
    state.ResumeTiming();
    for (std::size_t i = 0; i < n; ++i)
      post.add(static_cast<std::uint32_t>(rng.uniform_int(arms.size())),
               rng.uniform(-1.0, 1.0));
    benchmark::DoNotOptimize(post.mean_at(0));
  }
}
BENCHMARK(BM_ArmPosteriorAppend)->Arg(32)->Arg(64);

AlgoConfig bench_config(const Problem& problem, int horizon) {
  AlgoConfig cfg;
  cfg.nu = 1.5;
  cfg.ell = 0.2;
  cfg.rkhs_norm_bound = problem.rkhs_norm().value_or(1.0);
  cfg.sub_gaussian_scale = 1.0;
  cfg.delta = 0.1;
  cfg.horizon = horizon;
  cfg.alpha = 1.0;
  cfg.seed = 1;
  return cfg;
}

void BM_AdaptiveCoverRun(benchmark::State& state) {
  const auto horizon = static_cast<int>(state.range(0));
  const KernelSpec kernel(1.5, 0.2, 2);
  const Problem problem = Problem::synthetic(2, kernel, 30, 1, 1.0);
  const AlgoConfig cfg = bench_config(problem, horizon);
  for (auto _ : state) {
    RunTrace trace = run_pi_gp_ucb(cfg, problem);
    benchmark::DoNotOptimize(trace.total_regret());
  }
}
BENCHMARK(BM_AdaptiveCoverRun)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_SingleStateRun(benchmark::State& state) {
  const auto horizon = static_cast<int>(state.range(0));
  const KernelSpec kernel(1.5, 0.2, 2);
  const Problem problem = Problem::synthetic(2, kernel, 30, 1, 1.0);
  const AlgoConfig cfg = bench_config(problem, horizon);
  for (auto _ : state) {
    RunTrace trace = run_igp_ucb(cfg, problem);
    benchmark::DoNotOptimize(trace.total_regret());
  }
}
BENCHMARK(BM_SingleStateRun)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
