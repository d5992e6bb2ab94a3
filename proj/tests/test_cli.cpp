#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "doctest.h"
#include "pigp/trace_io.hpp"

namespace fs = std::filesystem;
using namespace pigp;

namespace {

// Fresh scratch directory per case, under the system temp root.
fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "pigp-cli-test" / name;
  std::error_code ec;
  fs::remove_all(dir, ec);
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string("\"") + PIGP_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  REQUIRE(st != -1);
  REQUIRE(WIFEXITED(st));
  return WEXITSTATUS(st);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("run writes a complete artifact tree") {
  const fs::path dir = scratch("tree");
  const fs::path out = dir / "out";
  const int rc = run_cli("run --problem synthetic --dim 1 --horizon 40"
                         " --seeds 2 --grid 12 --freeze-timing --out \"" +
                         out.string() + "\"");
  CHECK(rc == 0);

  for (const char* algo : {"pi-gp-ucb", "uniform"}) {
    CHECK(fs::exists(out / algo / "trace_seed1.csv"));
    CHECK(fs::exists(out / algo / "trace_seed2.csv"));
    CHECK(fs::exists(out / algo / "problem_seed1.txt"));
  }
  CHECK(fs::exists(out / "pi-gp-ucb" / "cover_seed1.csv") == false);
  CHECK(fs::exists(out / "pi-gp-ucb" / "cover_seed1.txt"));
  CHECK(fs::exists(out / "uniform" / "cover_seed1.txt") == false);

  const RunTrace trace = read_trace_csv(out / "pi-gp-ucb" / "trace_seed1.csv");
  CHECK(trace.dim == 1);
  REQUIRE(trace.steps.size() == 40);
  CHECK(trace.steps.front().t == 1);
  CHECK(trace.steps.back().t == 40);
  CHECK(trace.steps.back().wall_clock_s == 0.0);  // frozen

  const Problem problem =
      read_problem_manifest(out / "pi-gp-ucb" / "problem_seed1.txt");
  CHECK(problem.dim() == 1);
  CHECK(problem.grid_per_axis() == 12);
  CHECK(problem.arm_count() == 12);
  CHECK(problem.noise().half_width == 1.0);  // synthetic default

  const std::string summary = slurp(out / "summary.json");
  CHECK(summary.find("\"pi-gp-ucb\"") != std::string::npos);
  CHECK(summary.find("\"uniform\"") != std::string::npos);
  CHECK(summary.find("\"median_fraction_vs_reference\"") != std::string::npos);
}

TEST_CASE("config file sets defaults and explicit flags override it") {
  const fs::path dir = scratch("config");
  const fs::path out = dir / "cfg-out";
  const fs::path ini = dir / "run.ini";
  {
    std::ofstream f(ini);
    f << "[run]\n"
      << "dim=1\n"
      << "horizon=30\n"
      << "seeds=1\n"
      << "grid=12\n"
      << "freeze-timing=true\n"
      << "out=" << out.string() << "\n";
  }
  const int rc =
      run_cli("--config \"" + ini.string() + "\" run --horizon 25");
  CHECK(rc == 0);

  const RunTrace trace = read_trace_csv(out / "pi-gp-ucb" / "trace_seed1.csv");
  CHECK(trace.steps.size() == 25);  // command line wins over the file
  const Problem problem =
      read_problem_manifest(out / "pi-gp-ucb" / "problem_seed1.txt");
  CHECK(problem.grid_per_axis() == 12);  // file value used where not overridden
  CHECK_FALSE(fs::exists(out / "pi-gp-ucb" / "trace_seed2.csv"));
}

TEST_CASE("algorithm list fans out and keeps the baseline") {
  const fs::path dir = scratch("algos");
  const fs::path out = dir / "out";
  const int rc = run_cli("run --problem branin --algo pi-gp-ucb,igp-ucb"
                         " --horizon 30 --seeds 1 --grid 10 --freeze-timing"
                         " --out \"" + out.string() + "\"");
  CHECK(rc == 0);
  for (const char* algo : {"pi-gp-ucb", "igp-ucb", "uniform"})
    CHECK(fs::exists(out / algo / "trace_seed1.csv"));

  const Problem problem =
      read_problem_manifest(out / "pi-gp-ucb" / "problem_seed1.txt");
  CHECK(problem.name() == "branin");
  CHECK(problem.dim() == 2);                  // benchmark names force dim 2
  CHECK(problem.noise().half_width == 0.1);   // benchmark default
  CHECK(problem.arm_count() == 100);
}

TEST_CASE("manifest problems round-trip through the binary") {
  const fs::path dir = scratch("manifest");
  const fs::path manifest = dir / "instance.txt";
  const KernelSpec kernel(1.5, 0.3, 1);
  const Problem original = Problem::synthetic(1, kernel, 9, 7, 0.5);
  write_problem_manifest(manifest, original);

  const fs::path out = dir / "out";
  const int rc = run_cli("run --problem \"manifest:" + manifest.string() +
                         "\" --horizon 20 --seeds 1 --freeze-timing --out \"" +
                         out.string() + "\"");
  CHECK(rc == 0);

  const Problem echoed =
      read_problem_manifest(out / "pi-gp-ucb" / "problem_seed1.txt");
  REQUIRE(echoed.arm_count() == original.arm_count());
  for (std::size_t i = 0; i < original.arm_count(); ++i)
    CHECK(echoed.reward(i) == original.reward(i));
  CHECK(echoed.noise().half_width == original.noise().half_width);
  CHECK(echoed.rkhs_norm().has_value());
  CHECK(*echoed.rkhs_norm() == *original.rkhs_norm());
}

TEST_CASE("plot renders the wide table and the svg") {
  const fs::path dir = scratch("plot");
  const fs::path out = dir / "out";
  REQUIRE(run_cli("run --problem synthetic --dim 1 --horizon 40 --seeds 2"
                  " --algo pi-gp-ucb,igp-ucb --freeze-timing --out \"" +
                  out.string() + "\"") == 0);
  CHECK(run_cli("plot --in \"" + out.string() + "\"") == 0);

  const std::string svg = slurp(out / "regret.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("pi-gp-ucb") != std::string::npos);
  CHECK(svg.find("uniform") != std::string::npos);

  const std::string table = slurp(out / "plot_data.csv");
  CHECK(table.rfind("t,", 0) == 0);
  CHECK(table.find("pi-gp-ucb_cum_med") != std::string::npos);
  CHECK(table.find("igp-ucb_cum_med") != std::string::npos);
}

TEST_CASE("bad arguments exit nonzero") {
  CHECK(run_cli("frobnicate") != 0);
  CHECK(run_cli("run --dim 0") != 0);
  CHECK(run_cli("run --delta 1.5 --horizon 5 --seeds 1") != 0);
  CHECK(run_cli("run --nu 2.0 --horizon 5 --seeds 1") != 0);
  CHECK(run_cli("plot --in /nonexistent-pigp-dir") != 0);
  CHECK(run_cli("") != 0);  // a subcommand is required
}

TEST_CASE("problem and config resolution rules") {
  cli::Options opts;
  opts.dim = 1;
  opts.grid = 9;
  opts.horizon = 100;

  SUBCASE("synthetic: exact norm, unit noise") {
    const Problem p = cli::make_problem(opts, 3);
    CHECK(p.noise().half_width == 1.0);
    const AlgoConfig cfg = cli::make_config(opts, p, 3);
    CHECK(cfg.rkhs_norm_bound == *p.rkhs_norm());
    CHECK(cfg.sub_gaussian_scale == 1.0);
    CHECK(cfg.seed == 3);
    CHECK(cfg.horizon == 100);
  }

  SUBCASE("benchmark: norm falls back to 1, noise to 0.1") {
    opts.problem = "camel";
    const Problem p = cli::make_problem(opts, 3);
    CHECK(p.dim() == 2);
    CHECK(p.noise().half_width == 0.1);
    CHECK_FALSE(p.rkhs_norm().has_value());
    const AlgoConfig cfg = cli::make_config(opts, p, 3);
    CHECK(cfg.rkhs_norm_bound == 1.0);
    CHECK(cfg.sub_gaussian_scale == 0.1);
  }

  SUBCASE("explicit overrides win") {
    opts.noise = 0.3;
    opts.rkhs_norm = 2.5;
    const Problem p = cli::make_problem(opts, 3);
    CHECK(p.noise().half_width == 0.3);
    const AlgoConfig cfg = cli::make_config(opts, p, 3);
    CHECK(cfg.rkhs_norm_bound == 2.5);
    CHECK(cfg.sub_gaussian_scale == 0.3);
  }

  SUBCASE("unknown problem name throws") {
    opts.problem = "levy";
    CHECK_THROWS(cli::make_problem(opts, 3));
  }
}

TEST_CASE("output directory resolution") {
  CHECK(cli::resolve_out_dir("somewhere") == fs::path("somewhere"));

  REQUIRE(setenv("PIGP_OUT", "env-dir", 1) == 0);
  CHECK(cli::resolve_out_dir("") == fs::path("env-dir"));
  CHECK(cli::resolve_out_dir("flag-dir") == fs::path("flag-dir"));

  REQUIRE(unsetenv("PIGP_OUT") == 0);
  CHECK(cli::resolve_out_dir("") == fs::path("out"));
}
