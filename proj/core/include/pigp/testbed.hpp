#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pigp/kernel.hpp"
#include "pigp/points.hpp"
#include "pigp/rng.hpp"

namespace pigp {

// Regular grid over [0,1]^dim with per_axis points per axis (endpoints
// included, spacing 1/(per_axis - 1)), enumerated row-major with the first
// axis slowest.
PointSet make_grid(int dim, int per_axis);

// Per-axis indices of one grid arm, inverse of the row-major enumeration.
std::vector<std::int64_t> arm_axis_indices(std::size_t arm, int dim,
                                           int per_axis);

// f(x) = sum_j a_j k(c_j, x): a finite kernel expansion with known norm
// |f|^2 = a^T K(c, c) a.
struct SyntheticRkhsFunction {
  KernelSpec kernel;
  PointSet centers;
  std::vector<double> coeffs;
  double norm;

  double eval(std::span<const double> x) const;
};

// Random expansion with 30 d centers uniform on [0,1]^d and coefficients
// uniform on [-1,1]; fully determined by the seed.
SyntheticRkhsFunction gen_synthetic(int dim, const KernelSpec& kernel,
                                    std::uint64_t seed);

// Observation noise uniform on [-half_width, half_width]; bounded, hence
// sub-Gaussian with scale half_width.
struct NoiseModel {
  double half_width;
  double sub_gaussian_scale() const { return half_width; }
  double sample(Rng& rng) const { return rng.uniform(-half_width, half_width); }
};

// A bandit instance: grid arms, a deterministic reward per arm, and the
// noise added on observation.
class Problem {
 public:
  static Problem synthetic(int dim, const KernelSpec& kernel, int per_axis,
                           std::uint64_t seed, double noise_half_width);
  static Problem from_function(std::string name, SyntheticRkhsFunction fn,
                               int per_axis, double noise_half_width);
  // arms must be make_grid(dim, per_axis) order for the cover algorithms'
  // exact arm membership to apply.
  static Problem from_rewards(std::string name, PointSet arms, int per_axis,
                              std::vector<double> rewards,
                              double noise_half_width);

  const std::string& name() const { return name_; }
  int dim() const { return arms_.dim(); }
  int grid_per_axis() const { return per_axis_; }
  std::size_t arm_count() const { return rewards_.size(); }
  std::span<const double> arm(std::size_t i) const { return arms_[i]; }
  const PointSet& arms() const { return arms_; }

  double reward(std::size_t i) const { return rewards_[i]; }
  double fstar() const;
  double gap(std::size_t i) const { return fstar() - rewards_[i]; }
  double observe(std::size_t i, Rng& rng) const {
    return rewards_[i] + noise_.sample(rng);
  }

  const NoiseModel& noise() const { return noise_; }
  // Exact RKHS norm when the reward came from a kernel expansion.
  std::optional<double> rkhs_norm() const;
  const std::optional<SyntheticRkhsFunction>& source() const { return source_; }

 private:
  Problem() = default;
  std::string name_;
  PointSet arms_;
  std::vector<double> rewards_;
  NoiseModel noise_{0.0};
  int per_axis_ = 0;
  std::optional<SyntheticRkhsFunction> source_;
};

// Classic 2-d optimisation baselines on their native domains.
double branin(double x1, double x2);
double six_hump_camel(double x1, double x2);
double goldstein_price(double x1, double x2);
double beale(double x1, double x2);

struct BenchmarkFunction {
  const char* name;
  double (*fn)(double, double);
  double lo0, hi0, lo1, hi1;  // native domain
};
std::span<const BenchmarkFunction> benchmark_functions();

// One benchmark as a bandit instance: inputs affinely mapped from [0,1]^2
// to the native domain, the negated outputs min-max scaled to [-1,1] over
// the grid so the best arm scores exactly 1.
Problem benchmark_problem(std::string_view name, int per_axis,
                          double noise_half_width);
std::vector<Problem> benchmark_suite(int per_axis, double noise_half_width);

}  // namespace pigp
