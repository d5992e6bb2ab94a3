#include "pigp/cover.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pigp {

namespace {
// denom = G 2^level must keep products with grid indices inside int64.
constexpr int kMaxLevel = 40;
}  // namespace

CoverConstants cover_constants(int dim, double nu) {
  if (dim < 1) throw std::invalid_argument("cover_constants: dim must be >= 1");
  if (!(nu > 1.0))
    throw std::invalid_argument("cover_constants: requires nu > 1");
  const double d = static_cast<double>(dim);
  return {(d + 1.0) / (d + 2.0 * nu),
          d * (d + 1.0) / (d * (d + 2.0) + 2.0 * nu)};
}

bool Hypercube::contains(std::span<const double> x) const {
  for (int a = 0; a < dim; ++a) {
    const double lo = lower(a);
    if (x[a] < lo || x[a] > lo + rho()) return false;
  }
  return true;
}

bool contains_grid_arm(const Hypercube& cube,
                       std::span<const std::int64_t> arm_axis_index,
                       std::int64_t points_per_axis) {
  // Arm coordinate j/(g-1) lies in [a/denom, (a+1)/denom] iff
  // a (g-1) <= j denom <= (a+1)(g-1).
  const std::int64_t gm1 = points_per_axis - 1;
  for (int a = 0; a < cube.dim; ++a) {
    const std::int64_t lhs = arm_axis_index[a] * cube.denom;
    if (lhs < cube.lower_num[a] * gm1 || lhs > (cube.lower_num[a] + 1) * gm1)
      return false;
  }
  return true;
}

std::vector<Hypercube> split_cube(const Hypercube& cube) {
  if (cube.level >= kMaxLevel)
    throw std::runtime_error("split_cube: resolution floor reached");
  const int d = cube.dim;
  std::vector<Hypercube> children;
  children.reserve(std::size_t(1) << d);
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << d); ++mask) {
    Hypercube c;
    c.dim = d;
    c.level = cube.level + 1;
    c.denom = cube.denom * 2;
    c.lower_num.resize(d);
    for (int a = 0; a < d; ++a)
      c.lower_num[a] = 2 * cube.lower_num[a] + ((mask >> a) & 1);
    children.push_back(std::move(c));
  }
  return children;
}

bool should_split(const Hypercube& cube, std::size_t n_points, double b) {
  return std::pow(cube.rho(), -1.0 / b) <
         static_cast<double>(n_points) + 1.0;
}

std::int64_t capacity_bound(int t, double b, int dim) {
  const double v =
      4.0 * std::pow(static_cast<double>(t) + 1.0, b * static_cast<double>(dim));
  if (v >= 9.2e18) throw std::overflow_error("capacity_bound: overflow");
  return static_cast<std::int64_t>(std::ceil(v));
}

Cover Cover::initial(int horizon, int dim, double q, bool single_cell) {
  if (horizon < 1) throw std::invalid_argument("Cover: horizon must be >= 1");
  if (dim < 1) throw std::invalid_argument("Cover: dim must be >= 1");
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("Cover: bad q");

  const int g =
      single_cell
          ? 1
          : static_cast<int>(std::ceil(std::pow(static_cast<double>(horizon),
                                                q / static_cast<double>(dim))));

  Cover cover;
  cover.dim_ = dim;
  cover.grid_per_axis_ = g;

  std::size_t count = 1;
  for (int a = 0; a < dim; ++a) count *= static_cast<std::size_t>(g);
  cover.active_.reserve(count);

  std::vector<std::int64_t> idx(dim, 0);
  for (std::size_t i = 0; i < count; ++i) {
    Hypercube c;
    c.id = cover.next_id_++;
    c.dim = dim;
    c.level = 0;
    c.created_at = 0;
    c.denom = g;
    c.lower_num = idx;
    cover.active_.push_back(std::move(c));
    for (int a = dim - 1; a >= 0; --a) {  // row-major: last axis fastest
      if (++idx[a] < g) break;
      idx[a] = 0;
    }
  }
  cover.history_count_ = count;
  return cover;
}

const Hypercube* Cover::find(std::uint64_t id) const {
  auto it = std::lower_bound(
      active_.begin(), active_.end(), id,
      [](const Hypercube& c, std::uint64_t v) { return c.id < v; });
  if (it == active_.end() || it->id != id) return nullptr;
  return &*it;
}

std::vector<std::uint64_t> Cover::containing(std::span<const double> x) const {
  std::vector<std::uint64_t> out;
  for (const Hypercube& c : active_)
    if (c.contains(x)) out.push_back(c.id);
  return out;
}

std::vector<Hypercube> Cover::split(std::uint64_t id, int step) {
  auto it = std::lower_bound(
      active_.begin(), active_.end(), id,
      [](const Hypercube& c, std::uint64_t v) { return c.id < v; });
  if (it == active_.end() || it->id != id)
    throw std::invalid_argument("Cover::split: unknown element id");

  std::vector<Hypercube> children = split_cube(*it);
  active_.erase(it);
  for (Hypercube& c : children) {
    c.id = next_id_++;
    c.created_at = step;
    active_.push_back(c);
  }
  history_count_ += children.size();
  return children;
}

}  // namespace pigp
