#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "pigp/cover.hpp"
#include "pigp/gp.hpp"
#include "pigp/stats.hpp"
#include "pigp/stats_impl.hpp"

namespace pigp::cli {

namespace {

constexpr double kSyntheticNoise = 1.0;
constexpr double kBenchmarkNoise = 0.1;

bool is_benchmark(const std::string& name) {
  for (const BenchmarkFunction& f : benchmark_functions())
    if (name == f.name) return true;
  return false;
}

std::vector<std::uint64_t> seed_list(int n) {
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(n));
  std::iota(seeds.begin(), seeds.end(), std::uint64_t{1});
  return seeds;
}

double median_or(std::vector<double> v, double fallback) {
  return v.empty() ? fallback : median(std::move(v));
}

}  // namespace

std::filesystem::path resolve_out_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("PIGP_OUT"); env && *env) return env;
  return "out";
}

Problem make_problem(const Options& opts, std::uint64_t seed) {
  if (opts.problem == "synthetic") {
    const KernelSpec kernel(opts.nu, opts.ell, opts.dim);
    const double noise = opts.noise >= 0.0 ? opts.noise : kSyntheticNoise;
    return Problem::synthetic(opts.dim, kernel, opts.grid, seed, noise);
  }
  if (is_benchmark(opts.problem)) {
    const double noise = opts.noise >= 0.0 ? opts.noise : kBenchmarkNoise;
    return benchmark_problem(opts.problem, opts.grid, noise);
  }
  if (opts.problem.rfind("manifest:", 0) == 0)
    return read_problem_manifest(
        std::filesystem::path(opts.problem.substr(9)));
  throw std::invalid_argument("unknown problem '" + opts.problem + "'");
}

AlgoConfig make_config(const Options& opts, const Problem& problem,
                       std::uint64_t seed) {
  AlgoConfig cfg;
  cfg.nu = opts.nu;
  cfg.ell = opts.ell;
  cfg.rkhs_norm_bound =
      opts.rkhs_norm > 0.0
          ? opts.rkhs_norm
          : problem.rkhs_norm().value_or(1.0);
  cfg.sub_gaussian_scale = problem.noise().sub_gaussian_scale();
  cfg.delta = opts.delta;
  cfg.horizon = opts.horizon;
  cfg.alpha = opts.alpha;
  cfg.seed = seed;
  cfg.full_argmax = opts.full_argmax;
  cfg.single_cell_init = opts.single_cell_init;
  cfg.split_before_observe = opts.split_before_observe;
  return cfg;
}

namespace {

RunTrace dispatch(const std::string& algo, const AlgoConfig& cfg,
                  const Problem& problem) {
  if (algo == "pi-gp-ucb") return run_pi_gp_ucb(cfg, problem);
  if (algo == "igp-ucb") return run_igp_ucb(cfg, problem);
  if (algo == "uniform") return run_uniform(cfg, problem);
  throw std::invalid_argument("unknown algorithm '" + algo + "'");
}

}  // namespace

AlgoSummary run_algorithm(const std::string& algo, const Options& opts,
                          const std::filesystem::path& out) {
  const std::filesystem::path dir = out / algo;
  std::filesystem::create_directories(dir);

  const auto seeds = seed_list(opts.seeds);
  auto outcomes = parallel_map(
      seeds,
      [&](std::uint64_t seed) -> SeedOutcome {
        try {
          const Problem problem = make_problem(opts, seed);
          const AlgoConfig cfg = make_config(opts, problem, seed);
          const RunTrace tr = dispatch(algo, cfg, problem);
          const std::string tag = "_seed" + std::to_string(seed);
          write_trace_csv(dir / ("trace" + tag + ".csv"), tr,
                          opts.freeze_timing);
          write_problem_manifest(dir / ("problem" + tag + ".txt"), problem);
          if (!tr.final_cover.empty())
            write_cover_snapshot(dir / ("cover" + tag + ".txt"),
                                 tr.final_cover);
          SeedOutcome o = summarize_trace(seed, tr);
          if (opts.freeze_timing) o.wall_clock_s = 0.0;
          return o;
        } catch (const std::exception& e) {
          SeedOutcome o;
          o.seed = seed;
          o.failed = true;
          o.error = e.what();
          return o;
        }
      },
      opts.jobs);

  AlgoSummary summary;
  summary.algorithm = algo;
  summary.seeds = std::move(outcomes);
  std::vector<double> regrets;
  for (const SeedOutcome& o : summary.seeds)
    if (!o.failed) regrets.push_back(o.total_regret);
  summary.median_regret = median_or(std::move(regrets), 0.0);
  return summary;
}

namespace {

void attach_reference_fractions(RunSummary& rs) {
  const AlgoSummary* ref = nullptr;
  for (const AlgoSummary& a : rs.algos)
    if (a.algorithm == rs.reference_algorithm) ref = &a;
  if (!ref) return;
  for (AlgoSummary& a : rs.algos) {
    if (a.algorithm == rs.reference_algorithm) continue;
    a.fraction_vs_reference.clear();
    std::vector<double> defined;
    for (std::size_t i = 0; i < a.seeds.size(); ++i) {
      FractionStat f;
      if (i < ref->seeds.size() && !a.seeds[i].failed &&
          !ref->seeds[i].failed)
        f = regret_fraction(a.seeds[i].total_regret,
                            ref->seeds[i].total_regret);
      a.fraction_vs_reference.push_back(f);
      if (f.defined) defined.push_back(f.value);
    }
    if (!defined.empty())
      a.median_fraction = {median(std::move(defined)), true};
  }
}

int run_into(const Options& opts, const std::filesystem::path& out,
             RunSummary* collect) {
  std::vector<std::string> algos = opts.algos;
  if (std::find(algos.begin(), algos.end(), "uniform") == algos.end())
    algos.push_back("uniform");  // always measured as the reference

  const Problem probe = make_problem(opts, 1);
  RunSummary rs;
  rs.problem = probe.name();
  rs.dim = probe.dim();
  rs.horizon = opts.horizon;
  rs.grid_per_axis = probe.grid_per_axis();
  rs.nu = opts.nu;
  rs.ell = opts.ell;
  rs.delta = opts.delta;
  rs.alpha = opts.alpha;
  rs.noise_half_width = probe.noise().half_width;
  rs.rkhs_norm_bound = opts.rkhs_norm;  // 0 means per-instance exact norm
  rs.reference_algorithm = "uniform";

  bool all_ok = true;
  for (const std::string& algo : algos) {
    rs.algos.push_back(run_algorithm(algo, opts, out));
    for (const SeedOutcome& o : rs.algos.back().seeds)
      if (o.failed) {
        all_ok = false;
        std::cerr << algo << " seed " << o.seed << " failed: " << o.error
                  << '\n';
      }
  }
  attach_reference_fractions(rs);
  write_summary_json(out / "summary.json", rs);

  for (const AlgoSummary& a : rs.algos) {
    std::cout << a.algorithm << ": median regret " << a.median_regret;
    if (a.median_fraction.defined)
      std::cout << " (" << a.median_fraction.value << " of uniform)";
    std::cout << " over " << a.seeds.size() << " seeds\n";
  }
  std::cout << "artifacts in " << out.string() << '\n';
  if (collect) *collect = std::move(rs);
  return all_ok ? 0 : 1;
}

}  // namespace

int run_command(const Options& opts) {
  return run_into(opts, resolve_out_dir(opts.out), nullptr);
}

int verify_lemmas_command(const Options& opts, const VerifyOptions& vopts) {
  const std::filesystem::path out = resolve_out_dir(opts.out);
  std::filesystem::create_directories(out);

  nlohmann::ordered_json report;
  report["horizons"] = vopts.horizons;
  report["seeds"] = opts.seeds;
  bool all_pass = true;

  for (int dim : vopts.dims) {
    Options o = opts;
    o.dim = dim;
    o.problem = "synthetic";
    const CoverConstants cc = cover_constants(dim, o.nu);

    std::vector<double> ts, med_gamma, med_elems, med_dense;
    std::vector<double> dense_ts;
    std::int64_t violations = 0;

    for (int T : vopts.horizons) {
      o.horizon = T;
      std::vector<double> gammas, elems, dense;
      for (std::uint64_t seed : seed_list(opts.seeds)) {
        const Problem problem = make_problem(o, seed);
        const AlgoConfig cfg = make_config(o, problem, seed);
        const RunTrace tr = run_pi_gp_ucb(cfg, problem);
        gammas.push_back(tr.max_element_gamma);
        elems.push_back(static_cast<double>(tr.cumulative_elements.back()));
        violations += tr.capacity_violations;

        if (T <= vopts.dense_horizon_cap) {
          // one undivided regression over every visited point measures how
          // much information the whole trajectory carries
          GpState dense_gp(KernelSpec(o.nu, o.ell, dim),
                           resolved_alpha(cfg));
          for (const StepRecord& r : tr.steps)
            dense_gp.add_observation(r.x, r.y);
          dense.push_back(dense_gp.information_gain());
        }
      }
      ts.push_back(T);
      med_gamma.push_back(median(gammas));
      med_elems.push_back(median(elems));
      if (!dense.empty()) {
        dense_ts.push_back(T);
        med_dense.push_back(median(dense));
      }
    }

    // (a) per-element information gain against log T log log T
    std::vector<double> rate;
    for (std::size_t i = 0; i < ts.size(); ++i)
      rate.push_back(med_gamma[i] /
                     (std::log(ts[i]) * std::log(std::log(ts[i]))));
    bool rate_ok = true;
    bool rate_complete = false;
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
      if (ts[i] < 1000.0) continue;
      rate_complete = true;
      if (rate[i + 1] > 1.2 * rate[i]) rate_ok = false;
    }

    // (b) cumulative element count growth
    const bool slopes_complete = ts.size() >= 2;
    const double elem_slope =
        slopes_complete ? loglog_slope(ts, med_elems) : 0.0;
    const double elem_bound = cc.q + 0.1;
    const bool elem_ok = !slopes_complete || elem_slope <= elem_bound;

    // (c) capacity
    const bool cap_ok = violations == 0;

    // (d) information gain of the undivided posterior over visited points
    const bool dense_complete = dense_ts.size() >= 2;
    const double dense_slope =
        dense_complete ? loglog_slope(dense_ts, med_dense) : 0.0;
    const double dense_bound = cc.q + 0.15;
    const bool dense_ok = !dense_complete || dense_slope <= dense_bound;

    nlohmann::ordered_json jd;
    jd["dim"] = dim;
    jd["median_max_gamma"] = med_gamma;
    jd["gamma_rate"] = rate;
    jd["gamma_rate_ok"] = rate_ok;
    jd["gamma_rate_complete"] = rate_complete;
    jd["median_cumulative_elements"] = med_elems;
    jd["element_slope"] = elem_slope;
    jd["element_slope_bound"] = elem_bound;
    jd["element_slope_ok"] = elem_ok;
    jd["capacity_violations"] = violations;
    jd["capacity_ok"] = cap_ok;
    jd["dense_horizons"] = dense_ts;
    jd["dense_gamma"] = med_dense;
    jd["dense_slope"] = dense_slope;
    jd["dense_slope_bound"] = dense_bound;
    jd["dense_slope_ok"] = dense_ok;
    jd["complete"] = slopes_complete && dense_complete;
    report["dims"].push_back(jd);

    const bool dim_pass = rate_ok && elem_ok && cap_ok && dense_ok;
    all_pass = all_pass && dim_pass;

    std::cout << "dim " << dim << ": gamma rate "
              << (rate_ok ? "ok" : "VIOLATED")
              << (rate_complete ? "" : " (incomplete)") << "; element slope "
              << elem_slope << " vs bound " << elem_bound << " "
              << (elem_ok ? "ok" : "VIOLATED") << "; capacity violations "
              << violations << "; dense gamma slope " << dense_slope
              << " vs bound " << dense_bound << " "
              << (dense_ok ? "ok" : "VIOLATED")
              << (dense_complete ? "" : " (incomplete)") << '\n';
  }

  report["pass"] = all_pass;
  std::ofstream jf(out / "verify_lemmas.json");
  jf << report.dump(2) << '\n';
  std::cout << (all_pass ? "all checks passed" : "CHECKS FAILED") << '\n';
  return all_pass ? 0 : 1;
}

int bench_suite_command(const Options& opts) {
  const std::filesystem::path out = resolve_out_dir(opts.out);
  nlohmann::ordered_json combined;
  int rc = 0;
  for (const BenchmarkFunction& f : benchmark_functions()) {
    Options o = opts;
    o.problem = f.name;
    o.dim = 2;
    o.algos = {"pi-gp-ucb", "igp-ucb"};
    RunSummary rs;
    std::cout << "== " << f.name << '\n';
    rc |= run_into(o, out / f.name, &rs);

    nlohmann::ordered_json jp;
    jp["problem"] = f.name;
    for (const AlgoSummary& a : rs.algos) {
      nlohmann::ordered_json ja;
      ja["median_regret"] = a.median_regret;
      if (a.median_fraction.defined)
        ja["median_fraction_vs_uniform"] = a.median_fraction.value;
      jp["algorithms"][a.algorithm] = ja;
    }
    combined["problems"].push_back(jp);
  }
  std::ofstream jf(out / "bench_summary.json");
  jf << combined.dump(2) << '\n';
  return rc;
}

namespace {

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--problem", o.problem,
                  "synthetic, a benchmark name (branin, camel, "
                  "goldstein-price, beale), or manifest:PATH");
  cmd->add_option("--dim", o.dim, "input dimension (synthetic instances)")
      ->check(CLI::Range(1, 3));
  cmd->add_option("--nu", o.nu, "kernel smoothness (0.5, 1.5 or 2.5)");
  cmd->add_option("--ell", o.ell, "kernel lengthscale");
  cmd->add_option("--grid", o.grid, "arms per axis")->check(CLI::Range(2, 4096));
  cmd->add_option("--noise", o.noise,
                  "observation noise half-width; negative picks the "
                  "per-problem default");
  cmd->add_option("--delta", o.delta, "confidence level");
  cmd->add_option("--alpha", o.alpha,
                  "ridge regularisation; <= 0 uses 1 + 2/horizon");
  cmd->add_option("--rkhs-norm", o.rkhs_norm,
                  "norm bound B; <= 0 uses the instance's exact norm when "
                  "known, else 1");
  cmd->add_option("--horizon", o.horizon, "steps per run")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seeds", o.seeds, "number of seeds (1..N)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--jobs", o.jobs, "parallel seed workers");
  cmd->add_option("--out", o.out, "output directory (default $PIGP_OUT or ./out)");
  cmd->add_flag("--full-argmax", o.full_argmax,
                "recompute every index from scratch each step");
  cmd->add_flag("--single-cell-init", o.single_cell_init,
                "start from one cell instead of the sized grid");
  cmd->add_flag("--split-before-observe", o.split_before_observe,
                "apply the split rule at the start of the step");
  cmd->add_flag("--freeze-timing", o.freeze_timing,
                "write zeros to timing fields for byte-stable artifacts");
}

}  // namespace

int main_entry(int argc, const char* const* argv) {
  CLI::App app{"bandit optimisation over adaptively refined hypercube covers"};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI configuration file");
  app.allow_config_extras(CLI::config_extras_mode::ignore_all);

  Options run_opts;
  CLI::App* run = app.add_subcommand("run", "run algorithms across seeds");
  add_common(run, run_opts);
  run->add_option("--algo", run_opts.algos,
                  "algorithms to run: pi-gp-ucb, igp-ucb, uniform")
      ->delimiter(',');

  Options verify_opts;
  verify_opts.seeds = 3;
  VerifyOptions vopts;
  CLI::App* verify = app.add_subcommand(
      "verify-lemmas", "empirical growth checks on synthetic instances");
  add_common(verify, verify_opts);
  verify->add_option("--dims", vopts.dims, "dimensions to sweep")
      ->delimiter(',');
  verify->add_option("--horizons", vopts.horizons, "horizon grid")
      ->delimiter(',');
  verify->add_option("--dense-cap", vopts.dense_horizon_cap,
                     "largest horizon for the dense replay check");

  Options bench_opts;
  bench_opts.horizon = 2000;
  bench_opts.seeds = 3;
  CLI::App* bench = app.add_subcommand(
      "bench-suite", "classic 2-d surfaces, both algorithms plus uniform");
  add_common(bench, bench_opts);

  PlotOptions popts;
  CLI::App* plot = app.add_subcommand("plot", "render plots from run output");
  plot->add_option("--in", popts.in, "output directory of a previous run")
      ->required();
  plot->add_option("--out", popts.out, "plot destination (default: --in)");
  plot->add_option("--algo", popts.algos, "algorithms to include")
      ->delimiter(',');
  plot->add_option("--window", popts.window, "smoothing window (steps)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (run->parsed()) return run_command(run_opts);
    if (verify->parsed()) return verify_lemmas_command(verify_opts, vopts);
    if (bench->parsed()) return bench_suite_command(bench_opts);
    if (plot->parsed()) return plot_command(popts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace pigp::cli
