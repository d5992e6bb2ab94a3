#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pigp/cover.hpp"
#include "pigp/gp.hpp"
#include "pigp/rng.hpp"
#include "pigp/testbed.hpp"

namespace pigp {

// Shared knobs for all three algorithms.  alpha <= 0 selects the default
// regularisation 1 + 2/horizon; experiment manifests typically pin it to 1.
struct AlgoConfig {
  double nu = 1.5;                 // model kernel smoothness
  double ell = 0.2;                // model kernel length scale
  double rkhs_norm_bound = 1.0;    // B
  double sub_gaussian_scale = 1.0; // L
  double delta = 0.1;
  int horizon = 0;
  double alpha = 0.0;
  std::uint64_t seed = 1;
  bool full_argmax = false;          // bypass the incremental posterior cache
  bool single_cell_init = false;     // start the cover from {[0,1]^d}
  bool split_before_observe = false; // apply the split rule at step start
};
double resolved_alpha(const AlgoConfig& cfg);

// Confidence width B + L sqrt(2 (gamma + 1 + log(1/delta_eff))).
double beta_width(double norm_bound, double sub_gaussian_scale,
                  double delta_eff, double gamma);

struct StepRecord {
  int t = 0;              // 1-based
  std::size_t arm = 0;    // grid index of the chosen point
  std::vector<double> x;  // its coordinates
  double y = 0.0;
  double regret = 0.0;    // f(x*) - f(x_t), from the true reward
  double ucb = 0.0;
  std::int64_t element_id = -1;  // maximising element; -1 when none applies
  int n_splits = 0;
  double wall_clock_s = 0.0;
};

struct SplitEvent {
  int t = 0;
  std::uint64_t parent = 0;
  std::vector<std::uint64_t> children;
};

struct RunTrace {
  std::string algorithm;
  int dim = 0;
  std::vector<StepRecord> steps;

  // Cover bookkeeping (cover-based runs only).
  std::size_t initial_cover_size = 0;
  std::vector<std::int64_t> cumulative_elements;  // history count after step t
  std::vector<SplitEvent> split_events;
  std::vector<Hypercube> final_cover;
  // Count of steps where the cumulative element count exceeded
  // max(initial cover size, capacity_bound(t)); zero on a correct run.
  int capacity_violations = 0;

  // Information gain diagnostics.
  double max_element_gamma = 0.0;    // over every element's final state
  std::vector<double> global_gamma;  // per step, single-state runs only

  // Visited (step, element) confidence pairs |mu - f| <= beta sigma.
  std::size_t confidence_pairs = 0;
  std::size_t confidence_violations = 0;

  int jitter_events = 0;
  double total_regret() const;
};

// Posterior over a fixed arm subset, kept in lockstep with an append-only
// GpState.  Appending one observation updates every arm's mean and
// variance in O(n m) by extending the triangular solve row by row, which
// reproduces exactly what per-arm solves against the final factor give.
class ArmPosterior {
 public:
  ArmPosterior(const KernelSpec& kernel, double alpha, const PointSet& grid,
               std::vector<std::uint32_t> arm_ids);

  void add(std::uint32_t arm, double y);

  const std::vector<std::uint32_t>& arm_ids() const { return arms_; }
  std::size_t count() const { return data_.size(); }
  const std::vector<std::pair<std::uint32_t, double>>& data() const {
    return data_;
  }
  const GpState& gp() const { return gp_; }

  // Position of an arm in arm_ids, if contained.
  std::optional<std::size_t> index_of(std::uint32_t arm) const;
  double mean_at(std::size_t pos) const { return mean_[pos]; }
  double sigma_at(std::size_t pos) const;

 private:
  const PointSet* grid_;
  std::vector<std::uint32_t> arms_;
  GpState gp_;
  std::vector<std::pair<std::uint32_t, double>> data_;
  std::vector<double> rows_;      // L^{-1} K(design, arms), row-major
  std::vector<double> mean_;      // posterior mean per arm
  std::vector<double> var_drop_;  // k(x,x) - sigma^2 per arm
};

// One active cover element with its independent regression state.
struct ElementState {
  Hypercube cube;
  ArmPosterior post;
};

// Stepwise driver for the adaptive-cover algorithm.  Each step selects the
// arm maximising max over containing elements of mu + beta sigma, observes
// it, appends the observation to every containing element, then splits
// every element whose data count crossed rho^(-1/b).
class PiGpUcb {
 public:
  PiGpUcb(const AlgoConfig& cfg, const Problem& problem);

  StepRecord step();
  RunTrace take_trace();

  int steps_done() const { return static_cast<int>(trace_.steps.size()); }
  const Cover& cover() const { return cover_; }
  const std::vector<ElementState>& elements() const { return elements_; }
  const CoverConstants& constants() const { return consts_; }

  // Index of one arm at the upcoming step, recomputed from scratch through
  // GpState::posterior; the verification path for the incremental cache.
  std::pair<double, std::int64_t> ucb_index(std::size_t arm) const;

 private:
  int apply_splits(int t);
  double element_beta(const ElementState& e, int t) const;

  const Problem* problem_;
  AlgoConfig cfg_;
  double alpha_;
  CoverConstants consts_;
  Cover cover_;
  std::vector<ElementState> elements_;  // sorted by cube id
  Rng noise_rng_;
  int t_ = 0;  // steps completed
  double retired_max_gamma_ = 0.0;
  int retired_jitter_ = 0;
  std::vector<double> best_val_;
  std::vector<std::int64_t> best_elem_;
  RunTrace trace_;
};

RunTrace run_pi_gp_ucb(const AlgoConfig& cfg, const Problem& problem);
RunTrace run_igp_ucb(const AlgoConfig& cfg, const Problem& problem);
RunTrace run_uniform(const AlgoConfig& cfg, const Problem& problem);

}  // namespace pigp
