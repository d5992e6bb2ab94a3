#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pigp/bandit.hpp"
#include "pigp/cover.hpp"
#include "pigp/testbed.hpp"

namespace pigp {

// Shortest decimal form that parses back to the same bits; used everywhere
// a double lands in a text artifact so reruns can be compared byte for byte.
std::string format_double(double v);
double parse_double(std::string_view s);  // throws on malformed input

// Column layout: t,x0..x{d-1},y,regret,ucb,element_id,n_splits,wall_clock_s.
// freeze_timing writes 0 in the timing column so two runs of the same seed
// produce identical bytes.
void write_trace_csv(std::ostream& out, const RunTrace& trace,
                     bool freeze_timing = false);
void write_trace_csv(const std::filesystem::path& path, const RunTrace& trace,
                     bool freeze_timing = false);

// Rebuilds steps from the CSV; dim is inferred from the x columns and the
// fields not present in the file (splits, cover, counters) stay empty.
RunTrace read_trace_csv(std::istream& in);
RunTrace read_trace_csv(const std::filesystem::path& path);

// One line per element: id level created_at rho lower-corner coordinates.
void write_cover_snapshot(std::ostream& out, std::span<const Hypercube> cover);
void write_cover_snapshot(const std::filesystem::path& path,
                          std::span<const Hypercube> cover);

// Full description of a bandit instance, exact under round-trip: either the
// kernel expansion behind a synthetic reward or the raw per-arm rewards.
void write_problem_manifest(std::ostream& out, const Problem& problem);
void write_problem_manifest(const std::filesystem::path& path,
                            const Problem& problem);
Problem read_problem_manifest(std::istream& in);
Problem read_problem_manifest(const std::filesystem::path& path);

// Per-seed rollup of a finished (or failed) run.
struct SeedOutcome {
  std::uint64_t seed = 0;
  bool failed = false;
  std::string error;
  double total_regret = 0.0;
  double max_gamma = 0.0;
  std::int64_t final_cover = 0;
  std::int64_t cumulative_elements = 0;
  std::int64_t capacity_violations = 0;
  std::int64_t confidence_pairs = 0;
  std::int64_t confidence_violations = 0;
  std::int64_t jitter_events = 0;
  double wall_clock_s = 0.0;
};

SeedOutcome summarize_trace(std::uint64_t seed, const RunTrace& trace);

// Ratio of cumulative regrets against a reference run; undefined (flagged,
// not silently zero) when the reference accumulated no regret.
struct FractionStat {
  double value = 0.0;
  bool defined = false;
};
FractionStat regret_fraction(double algo_regret, double reference_regret);

struct AlgoSummary {
  std::string algorithm;
  std::vector<SeedOutcome> seeds;
  double median_regret = 0.0;
  std::vector<FractionStat> fraction_vs_reference;  // aligned with seeds
  FractionStat median_fraction;
};

struct RunSummary {
  std::string problem;
  int dim = 0;
  int horizon = 0;
  int grid_per_axis = 0;
  double nu = 0.0;
  double ell = 0.0;
  double delta = 0.0;
  double alpha = 0.0;
  double noise_half_width = 0.0;
  double rkhs_norm_bound = 0.0;
  std::string reference_algorithm;
  std::vector<AlgoSummary> algos;
};

void write_summary_json(std::ostream& out, const RunSummary& summary);
void write_summary_json(const std::filesystem::path& path,
                        const RunSummary& summary);

}  // namespace pigp
