#include "pigp/bandit.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pigp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void validate_common(const AlgoConfig& cfg, const Problem& problem) {
  if (cfg.horizon < 1)
    throw std::invalid_argument("AlgoConfig: horizon must be >= 1");
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0))
    throw std::invalid_argument("AlgoConfig: delta must be in (0,1)");
  if (cfg.rkhs_norm_bound < 0.0 || cfg.sub_gaussian_scale < 0.0)
    throw std::invalid_argument("AlgoConfig: negative B or L");
  if (problem.grid_per_axis() < 2)
    throw std::invalid_argument("AlgoConfig: problem arms must form a grid");
}

std::vector<double> arm_coords(const Problem& p, std::size_t arm) {
  const auto span = p.arm(arm);
  return {span.begin(), span.end()};
}

// Derived stream tags so noise and arm draws never share state.
constexpr std::uint64_t kNoiseStream = 1;
constexpr std::uint64_t kArmStream = 2;

}  // namespace

double resolved_alpha(const AlgoConfig& cfg) {
  if (cfg.alpha > 0.0) return cfg.alpha;
  return 1.0 + 2.0 / static_cast<double>(cfg.horizon);
}

double beta_width(double norm_bound, double sub_gaussian_scale,
                  double delta_eff, double gamma) {
  if (!(delta_eff > 0.0 && delta_eff < 1.0))
    throw std::invalid_argument("beta_width: delta_eff must be in (0,1)");
  if (gamma < 0.0) throw std::invalid_argument("beta_width: negative gamma");
  return norm_bound +
         sub_gaussian_scale *
             std::sqrt(2.0 * (gamma + 1.0 + std::log(1.0 / delta_eff)));
}

double RunTrace::total_regret() const {
  double s = 0.0;
  for (const StepRecord& r : steps) s += r.regret;
  return s;
}

ArmPosterior::ArmPosterior(const KernelSpec& kernel, double alpha,
                           const PointSet& grid,
                           std::vector<std::uint32_t> arm_ids)
    : grid_(&grid),
      arms_(std::move(arm_ids)),
      gp_(kernel, alpha),
      mean_(arms_.size(), 0.0),
      var_drop_(arms_.size(), 0.0) {}

std::optional<std::size_t> ArmPosterior::index_of(std::uint32_t arm) const {
  auto it = std::lower_bound(arms_.begin(), arms_.end(), arm);
  if (it == arms_.end() || *it != arm) return std::nullopt;
  return static_cast<std::size_t>(it - arms_.begin());
}

double ArmPosterior::sigma_at(std::size_t pos) const {
  const double var = 1.0 - var_drop_[pos];
  return var > 0.0 ? std::sqrt(var) : 0.0;
}

void ArmPosterior::add(std::uint32_t arm, double y) {
  const std::span<const double> x = (*grid_)[arm];
  gp_.add_observation(x, y);
  data_.emplace_back(arm, y);

  const std::size_t n = gp_.size();  // rows in the factor, incl. the new one
  const std::size_t m = arms_.size();
  const std::span<const double> lrow = gp_.factor_row(n - 1);
  const double znew = gp_.whitened_observations()[n - 1];

  // Extend V = L^{-1} K(design, arms) by its new row, then fold that row
  // into the running mean and variance reduction of every arm.
  const std::size_t base = rows_.size();
  rows_.resize(base + m);
  double* out = rows_.data() + base;
  for (std::size_t j = 0; j < m; ++j)
    out[j] = matern_eval(gp_.kernel(), x, (*grid_)[arms_[j]]);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double l = lrow[i];
    const double* vi = rows_.data() + i * m;
    for (std::size_t j = 0; j < m; ++j) out[j] -= l * vi[j];
  }
  const double inv = 1.0 / lrow[n - 1];
  for (std::size_t j = 0; j < m; ++j) {
    out[j] *= inv;
    mean_[j] += out[j] * znew;
    var_drop_[j] += out[j] * out[j];
  }
}

PiGpUcb::PiGpUcb(const AlgoConfig& cfg, const Problem& problem)
    : problem_(&problem),
      cfg_(cfg),
      alpha_(resolved_alpha(cfg)),
      consts_(cover_constants(problem.dim(), cfg.nu)),
      cover_(Cover::initial(cfg.horizon, problem.dim(), consts_.q,
                            cfg.single_cell_init)),
      noise_rng_(mix_seed(cfg.seed, kNoiseStream)) {
  validate_common(cfg, problem);
  const KernelSpec kernel(cfg.nu, cfg.ell, problem.dim());

  const int g = problem.grid_per_axis();
  const std::size_t n_arms = problem.arm_count();
  std::vector<std::vector<std::uint32_t>> per_cube(cover_.active().size());
  for (std::size_t a = 0; a < n_arms; ++a) {
    const auto idx = arm_axis_indices(a, problem.dim(), g);
    for (std::size_t c = 0; c < cover_.active().size(); ++c)
      if (contains_grid_arm(cover_.active()[c], idx, g))
        per_cube[c].push_back(static_cast<std::uint32_t>(a));
  }
  elements_.reserve(per_cube.size());
  for (std::size_t c = 0; c < cover_.active().size(); ++c)
    elements_.push_back(ElementState{
        cover_.active()[c],
        ArmPosterior(kernel, alpha_, problem.arms(), std::move(per_cube[c]))});

  best_val_.resize(n_arms);
  best_elem_.resize(n_arms);
  trace_.algorithm = "pi-gp-ucb";
  trace_.dim = problem.dim();
  trace_.initial_cover_size = cover_.history_count();
}

double PiGpUcb::element_beta(const ElementState& e, int t) const {
  const double cap =
      static_cast<double>(capacity_bound(t, consts_.b, problem_->dim()));
  return beta_width(cfg_.rkhs_norm_bound, cfg_.sub_gaussian_scale,
                    cfg_.delta / cap, e.post.gp().information_gain());
}

std::pair<double, std::int64_t> PiGpUcb::ucb_index(std::size_t arm) const {
  const int t = t_ + 1;
  const int g = problem_->grid_per_axis();
  const auto idx = arm_axis_indices(arm, problem_->dim(), g);
  double best = -std::numeric_limits<double>::infinity();
  std::int64_t best_id = -1;
  for (const ElementState& e : elements_) {
    if (!contains_grid_arm(e.cube, idx, g)) continue;
    const PosteriorStats ps = e.post.gp().posterior(problem_->arm(arm));
    const double val = ps.mean + element_beta(e, t) * ps.std;
    if (val > best) {
      best = val;
      best_id = static_cast<std::int64_t>(e.cube.id);
    }
  }
  if (best_id < 0)
    throw std::logic_error("ucb_index: arm not covered by any element");
  return {best, best_id};
}

int PiGpUcb::apply_splits(int t) {
  std::vector<std::uint64_t> to_split;
  for (const ElementState& e : elements_)
    if (should_split(e.cube, e.post.count(), consts_.b))
      to_split.push_back(e.cube.id);

  const int g = problem_->grid_per_axis();
  const int d = problem_->dim();
  const KernelSpec kernel(cfg_.nu, cfg_.ell, d);

  for (std::uint64_t id : to_split) {
    auto it = std::lower_bound(
        elements_.begin(), elements_.end(), id,
        [](const ElementState& e, std::uint64_t v) { return e.cube.id < v; });
    ElementState parent = std::move(*it);
    elements_.erase(it);
    retired_max_gamma_ =
        std::max(retired_max_gamma_, parent.post.gp().information_gain());
    retired_jitter_ += parent.post.gp().jitter_events();

    SplitEvent ev;
    ev.t = t;
    ev.parent = id;
    std::vector<Hypercube> children = cover_.split(id, t);

    // Pre-compute each inherited arm's axis indices once.
    std::vector<std::vector<std::int64_t>> arm_idx;
    arm_idx.reserve(parent.post.arm_ids().size());
    for (std::uint32_t a : parent.post.arm_ids())
      arm_idx.push_back(arm_axis_indices(a, d, g));

    for (Hypercube& cube : children) {
      std::vector<std::uint32_t> arms;
      for (std::size_t i = 0; i < arm_idx.size(); ++i)
        if (contains_grid_arm(cube, arm_idx[i], g))
          arms.push_back(parent.post.arm_ids()[i]);

      ElementState child{
          cube, ArmPosterior(kernel, alpha_, problem_->arms(), std::move(arms))};
      for (const auto& [arm, y] : parent.post.data())
        if (contains_grid_arm(cube, arm_axis_indices(arm, d, g), g))
          child.post.add(arm, y);
      if (should_split(child.cube, child.post.count(), consts_.b))
        throw std::logic_error("apply_splits: fresh child crosses threshold");
      ev.children.push_back(cube.id);
      elements_.push_back(std::move(child));
    }
    trace_.split_events.push_back(std::move(ev));
  }
  return static_cast<int>(to_split.size());
}

StepRecord PiGpUcb::step() {
  if (t_ >= cfg_.horizon) throw std::logic_error("PiGpUcb: horizon exhausted");
  const int t = t_ + 1;
  const std::size_t n_arms = problem_->arm_count();
  const int g = problem_->grid_per_axis();

  const auto start = Clock::now();
  int n_splits = 0;
  if (cfg_.split_before_observe) n_splits = apply_splits(t);

  // Selection: per-arm maximum of mean + beta sigma over covering elements,
  // iterating elements in ascending id order so value ties keep the
  // smallest element id.
  std::size_t arm = 0;
  double ucb;
  std::int64_t elem_id;
  if (cfg_.full_argmax) {
    double best = -std::numeric_limits<double>::infinity();
    std::int64_t best_id = -1;
    for (std::size_t a = 0; a < n_arms; ++a) {
      const auto [val, id] = ucb_index(a);
      if (val > best) {
        best = val;
        best_id = id;
        arm = a;
      }
    }
    ucb = best;
    elem_id = best_id;
  } else {
    std::fill(best_val_.begin(), best_val_.end(),
              -std::numeric_limits<double>::infinity());
    std::fill(best_elem_.begin(), best_elem_.end(), std::int64_t{-1});
    for (const ElementState& e : elements_) {
      const auto& ids = e.post.arm_ids();
      if (ids.empty()) continue;
      const double beta = element_beta(e, t);
      for (std::size_t j = 0; j < ids.size(); ++j) {
        const double val = e.post.mean_at(j) + beta * e.post.sigma_at(j);
        const std::uint32_t a = ids[j];
        if (val > best_val_[a]) {
          best_val_[a] = val;
          best_elem_[a] = static_cast<std::int64_t>(e.cube.id);
        }
      }
    }
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < n_arms; ++a) {
      if (best_elem_[a] < 0)
        throw std::logic_error("PiGpUcb: arm left uncovered");
      if (best_val_[a] > best) {
        best = best_val_[a];
        arm = a;
      }
    }
    ucb = best;
    elem_id = best_elem_[arm];
  }

  const double y = problem_->observe(arm, noise_rng_);

  // Record confidence pairs against the true reward, then append the
  // observation to every element containing the chosen arm.
  const double truth = problem_->reward(arm);
  const auto idx = arm_axis_indices(arm, problem_->dim(), g);
  for (ElementState& e : elements_) {
    if (!contains_grid_arm(e.cube, idx, g)) continue;
    const auto pos = e.post.index_of(static_cast<std::uint32_t>(arm));
    if (!pos)
      throw std::logic_error("PiGpUcb: membership lists out of sync");
    const double beta = element_beta(e, t);
    ++trace_.confidence_pairs;
    if (std::abs(e.post.mean_at(*pos) - truth) >
        beta * e.post.sigma_at(*pos))
      ++trace_.confidence_violations;
    e.post.add(static_cast<std::uint32_t>(arm), y);
  }

  if (!cfg_.split_before_observe) n_splits = apply_splits(t);
  const double elapsed = seconds_since(start);

  StepRecord rec;
  rec.t = t;
  rec.arm = arm;
  rec.x = arm_coords(*problem_, arm);
  rec.y = y;
  rec.regret = problem_->gap(arm);
  rec.ucb = ucb;
  rec.element_id = elem_id;
  rec.n_splits = n_splits;
  rec.wall_clock_s = elapsed;
  trace_.steps.push_back(rec);

  const std::int64_t history =
      static_cast<std::int64_t>(cover_.history_count());
  trace_.cumulative_elements.push_back(history);
  const std::int64_t allowed =
      std::max(static_cast<std::int64_t>(trace_.initial_cover_size),
               capacity_bound(t, consts_.b, problem_->dim()));
  if (history > allowed) ++trace_.capacity_violations;

  t_ = t;
  return rec;
}

RunTrace PiGpUcb::take_trace() {
  double mg = retired_max_gamma_;
  int jitter = retired_jitter_;
  for (const ElementState& e : elements_) {
    mg = std::max(mg, e.post.gp().information_gain());
    jitter += e.post.gp().jitter_events();
  }
  trace_.max_element_gamma = mg;
  trace_.jitter_events = jitter;
  trace_.final_cover = cover_.active();
  return std::move(trace_);
}

RunTrace run_pi_gp_ucb(const AlgoConfig& cfg, const Problem& problem) {
  PiGpUcb algo(cfg, problem);
  for (int t = 0; t < cfg.horizon; ++t) algo.step();
  return algo.take_trace();
}

RunTrace run_igp_ucb(const AlgoConfig& cfg, const Problem& problem) {
  validate_common(cfg, problem);
  const KernelSpec kernel(cfg.nu, cfg.ell, problem.dim());
  const double alpha = resolved_alpha(cfg);
  const std::size_t n_arms = problem.arm_count();

  std::vector<std::uint32_t> all(n_arms);
  std::iota(all.begin(), all.end(), 0);
  ArmPosterior post(kernel, alpha, problem.arms(), std::move(all));
  Rng noise(mix_seed(cfg.seed, kNoiseStream));

  RunTrace trace;
  trace.algorithm = "igp-ucb";
  trace.dim = problem.dim();
  trace.steps.reserve(cfg.horizon);
  trace.global_gamma.reserve(cfg.horizon);

  for (int t = 1; t <= cfg.horizon; ++t) {
    const auto start = Clock::now();
    const double beta =
        beta_width(cfg.rkhs_norm_bound, cfg.sub_gaussian_scale, cfg.delta,
                   post.gp().information_gain());
    std::size_t arm = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < n_arms; ++a) {
      double val;
      if (cfg.full_argmax) {
        const PosteriorStats ps = post.gp().posterior(problem.arm(a));
        val = ps.mean + beta * ps.std;
      } else {
        val = post.mean_at(a) + beta * post.sigma_at(a);
      }
      if (val > best) {
        best = val;
        arm = a;
      }
    }
    const double y = problem.observe(arm, noise);
    ++trace.confidence_pairs;
    if (std::abs(post.mean_at(arm) - problem.reward(arm)) >
        beta * post.sigma_at(arm))
      ++trace.confidence_violations;
    post.add(static_cast<std::uint32_t>(arm), y);
    const double elapsed = seconds_since(start);

    StepRecord rec;
    rec.t = t;
    rec.arm = arm;
    rec.x = arm_coords(problem, arm);
    rec.y = y;
    rec.regret = problem.gap(arm);
    rec.ucb = best;
    rec.element_id = 0;
    rec.n_splits = 0;
    rec.wall_clock_s = elapsed;
    trace.steps.push_back(rec);
    trace.global_gamma.push_back(post.gp().information_gain());
  }
  trace.max_element_gamma = post.gp().information_gain();
  trace.jitter_events = post.gp().jitter_events();
  return trace;
}

RunTrace run_uniform(const AlgoConfig& cfg, const Problem& problem) {
  validate_common(cfg, problem);
  Rng noise(mix_seed(cfg.seed, kNoiseStream));
  Rng arms(mix_seed(cfg.seed, kArmStream));

  RunTrace trace;
  trace.algorithm = "uniform";
  trace.dim = problem.dim();
  trace.steps.reserve(cfg.horizon);

  for (int t = 1; t <= cfg.horizon; ++t) {
    const auto start = Clock::now();
    const std::size_t arm =
        static_cast<std::size_t>(arms.uniform_int(problem.arm_count()));
    const double y = problem.observe(arm, noise);
    const double elapsed = seconds_since(start);

    StepRecord rec;
    rec.t = t;
    rec.arm = arm;
    rec.x = arm_coords(problem, arm);
    rec.y = y;
    rec.regret = problem.gap(arm);
    rec.wall_clock_s = elapsed;
    trace.steps.push_back(rec);
  }
  return trace;
}

}  // namespace pigp
