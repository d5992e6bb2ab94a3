#include "pigp/testbed.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pigp {

namespace {
constexpr std::size_t kMaxArms = 10'000'000;
constexpr int kCentersPerDim = 30;
}  // namespace

PointSet make_grid(int dim, int per_axis) {
  if (dim < 1) throw std::invalid_argument("make_grid: dim must be >= 1");
  if (per_axis < 2) throw std::invalid_argument("make_grid: per_axis must be >= 2");

  std::size_t count = 1;
  for (int a = 0; a < dim; ++a) {
    count *= static_cast<std::size_t>(per_axis);
    if (count > kMaxArms) throw std::invalid_argument("make_grid: grid too large");
  }

  PointSet grid(dim);
  grid.reserve(count);
  const double step = 1.0 / (per_axis - 1);
  std::vector<std::int64_t> idx(dim, 0);
  std::vector<double> p(dim);
  for (std::size_t i = 0; i < count; ++i) {
    for (int a = 0; a < dim; ++a) p[a] = static_cast<double>(idx[a]) * step;
    grid.push_back(p);
    for (int a = dim - 1; a >= 0; --a) {
      if (++idx[a] < per_axis) break;
      idx[a] = 0;
    }
  }
  return grid;
}

std::vector<std::int64_t> arm_axis_indices(std::size_t arm, int dim,
                                           int per_axis) {
  std::vector<std::int64_t> idx(dim);
  for (int a = dim - 1; a >= 0; --a) {
    idx[a] = static_cast<std::int64_t>(arm % per_axis);
    arm /= per_axis;
  }
  return idx;
}

double SyntheticRkhsFunction::eval(std::span<const double> x) const {
  double s = 0.0;
  for (std::size_t j = 0; j < coeffs.size(); ++j)
    s += coeffs[j] * matern_eval(kernel, centers[j], x);
  return s;
}

SyntheticRkhsFunction gen_synthetic(int dim, const KernelSpec& kernel,
                                    std::uint64_t seed) {
  if (kernel.dim != dim)
    throw std::invalid_argument("gen_synthetic: kernel dimension mismatch");
  Rng rng(seed);
  const int m = kCentersPerDim * dim;

  PointSet centers(dim);
  centers.reserve(m);
  std::vector<double> p(dim);
  for (int j = 0; j < m; ++j) {
    for (int a = 0; a < dim; ++a) p[a] = rng.uniform01();
    centers.push_back(p);
  }
  std::vector<double> coeffs(m);
  for (int j = 0; j < m; ++j) coeffs[j] = rng.uniform(-1.0, 1.0);

  const Eigen::MatrixXd k = gram_matrix(kernel, centers);
  const Eigen::Map<const Eigen::VectorXd> a(coeffs.data(), m);
  const double norm_sq = a.dot(k * a);

  return {kernel, std::move(centers), std::move(coeffs),
          std::sqrt(std::max(norm_sq, 0.0))};
}

Problem Problem::from_rewards(std::string name, PointSet arms, int per_axis,
                              std::vector<double> rewards,
                              double noise_half_width) {
  if (arms.size() != rewards.size())
    throw std::invalid_argument("Problem: arms/rewards size mismatch");
  if (arms.empty()) throw std::invalid_argument("Problem: no arms");
  if (noise_half_width < 0.0)
    throw std::invalid_argument("Problem: negative noise width");
  Problem p;
  p.name_ = std::move(name);
  p.arms_ = std::move(arms);
  p.rewards_ = std::move(rewards);
  p.noise_ = {noise_half_width};
  p.per_axis_ = per_axis;
  return p;
}

Problem Problem::from_function(std::string name, SyntheticRkhsFunction fn,
                               int per_axis, double noise_half_width) {
  PointSet arms = make_grid(fn.kernel.dim, per_axis);
  std::vector<double> rewards(arms.size());
  for (std::size_t i = 0; i < arms.size(); ++i) rewards[i] = fn.eval(arms[i]);
  Problem p = from_rewards(std::move(name), std::move(arms), per_axis,
                           std::move(rewards), noise_half_width);
  p.source_ = std::move(fn);
  return p;
}

Problem Problem::synthetic(int dim, const KernelSpec& kernel, int per_axis,
                           std::uint64_t seed, double noise_half_width) {
  return from_function("synthetic-d" + std::to_string(dim) + "-s" +
                           std::to_string(seed),
                       gen_synthetic(dim, kernel, seed), per_axis,
                       noise_half_width);
}

double Problem::fstar() const {
  return *std::max_element(rewards_.begin(), rewards_.end());
}

std::optional<double> Problem::rkhs_norm() const {
  if (source_) return source_->norm;
  return std::nullopt;
}

double branin(double x1, double x2) {
  const double a = 1.0;
  const double b = 5.1 / (4.0 * M_PI * M_PI);
  const double c = 5.0 / M_PI;
  const double r = 6.0;
  const double s = 10.0;
  const double t = 1.0 / (8.0 * M_PI);
  const double u = x2 - b * x1 * x1 + c * x1 - r;
  return a * u * u + s * (1.0 - t) * std::cos(x1) + s;
}

double six_hump_camel(double x1, double x2) {
  const double x1s = x1 * x1;
  const double x2s = x2 * x2;
  return (4.0 - 2.1 * x1s + x1s * x1s / 3.0) * x1s + x1 * x2 +
         (-4.0 + 4.0 * x2s) * x2s;
}

double goldstein_price(double x1, double x2) {
  const double u = x1 + x2 + 1.0;
  const double v = 2.0 * x1 - 3.0 * x2;
  return (1.0 + u * u *
                    (19.0 - 14.0 * x1 + 3.0 * x1 * x1 - 14.0 * x2 +
                     6.0 * x1 * x2 + 3.0 * x2 * x2)) *
         (30.0 + v * v *
                     (18.0 - 32.0 * x1 + 12.0 * x1 * x1 + 48.0 * x2 -
                      36.0 * x1 * x2 + 27.0 * x2 * x2));
}

double beale(double x1, double x2) {
  const double u = 1.5 - x1 + x1 * x2;
  const double v = 2.25 - x1 + x1 * x2 * x2;
  const double w = 2.625 - x1 + x1 * x2 * x2 * x2;
  return u * u + v * v + w * w;
}

std::span<const BenchmarkFunction> benchmark_functions() {
  static const BenchmarkFunction table[] = {
      {"branin", branin, -5.0, 10.0, 0.0, 15.0},
      {"camel", six_hump_camel, -3.0, 3.0, -2.0, 2.0},
      {"goldstein-price", goldstein_price, -2.0, 2.0, -2.0, 2.0},
      {"beale", beale, -4.5, 4.5, -4.5, 4.5},
  };
  return table;
}

Problem benchmark_problem(std::string_view name, int per_axis,
                          double noise_half_width) {
  const BenchmarkFunction* bf = nullptr;
  for (const BenchmarkFunction& f : benchmark_functions())
    if (name == f.name) bf = &f;
  if (!bf) throw std::invalid_argument("benchmark_problem: unknown name");

  PointSet arms = make_grid(2, per_axis);
  std::vector<double> rewards(arms.size());
  for (std::size_t i = 0; i < arms.size(); ++i) {
    const auto p = arms[i];
    const double x1 = bf->lo0 + (bf->hi0 - bf->lo0) * p[0];
    const double x2 = bf->lo1 + (bf->hi1 - bf->lo1) * p[1];
    rewards[i] = -bf->fn(x1, x2);  // maximise the negated objective
  }
  const auto [lo_it, hi_it] = std::minmax_element(rewards.begin(), rewards.end());
  const double lo = *lo_it, hi = *hi_it;
  const double span = hi - lo;
  for (double& v : rewards)
    v = span > 0.0 ? -1.0 + 2.0 * (v - lo) / span : 0.0;

  return Problem::from_rewards(std::string(name), std::move(arms), per_axis,
                               std::move(rewards), noise_half_width);
}

std::vector<Problem> benchmark_suite(int per_axis, double noise_half_width) {
  std::vector<Problem> out;
  for (const BenchmarkFunction& f : benchmark_functions())
    out.push_back(benchmark_problem(f.name, per_axis, noise_half_width));
  return out;
}

}  // namespace pigp
