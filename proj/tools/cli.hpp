#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pigp/bandit.hpp"
#include "pigp/testbed.hpp"
#include "pigp/trace_io.hpp"

namespace pigp::cli {

// Shared knobs across subcommands; each one binds the subset it uses.
struct Options {
  std::string problem = "synthetic";  // synthetic | branin | camel |
                                      // goldstein-price | beale | manifest:P
  int dim = 1;
  double nu = 1.5;
  double ell = 0.2;
  int grid = 30;
  double noise = -1.0;  // negative: 1.0 for synthetic, 0.1 for benchmarks
  double delta = 0.1;
  double alpha = 1.0;   // <= 0 switches to the horizon-coupled default
  double rkhs_norm = 0.0;  // <= 0: exact value for synthetic instances, else 1
  int horizon = 1000;
  int seeds = 5;
  unsigned jobs = 1;
  std::string out;  // empty: $PIGP_OUT or "out"
  bool full_argmax = false;
  bool single_cell_init = false;
  bool split_before_observe = false;
  bool freeze_timing = false;
  std::vector<std::string> algos{"pi-gp-ucb"};
};

struct VerifyOptions {
  std::vector<int> dims{1, 2};
  std::vector<int> horizons{500, 1000, 2000, 4000};
  int dense_horizon_cap = 2000;  // cost ceiling for the dense replay check
};

struct PlotOptions {
  std::string in;   // output directory of a previous `run`
  std::string out;  // defaults to `in`
  std::vector<std::string> algos;  // empty: every algorithm found
  std::size_t window = 200;
};

std::filesystem::path resolve_out_dir(const std::string& flag_value);

// Instance factory shared by every subcommand; benchmark names force dim 2.
Problem make_problem(const Options& opts, std::uint64_t seed);

// Bandit configuration for one seed against one instance.
AlgoConfig make_config(const Options& opts, const Problem& problem,
                       std::uint64_t seed);

// Runs one algorithm across the seed fan-out, writing trace / manifest /
// cover artifacts under <out>/<algo>/.  A failed seed is reported in its
// outcome and does not abort the siblings.
AlgoSummary run_algorithm(const std::string& algo, const Options& opts,
                          const std::filesystem::path& out);

int run_command(const Options& opts);
int verify_lemmas_command(const Options& opts, const VerifyOptions& vopts);
int bench_suite_command(const Options& opts);
int plot_command(const PlotOptions& popts);

// Assembles plot_data.csv and regret.svg from per-seed traces.
int build_plots(const std::filesystem::path& in,
                const std::filesystem::path& out,
                std::vector<std::string> algos, std::size_t window);

int main_entry(int argc, const char* const* argv);

}  // namespace pigp::cli
