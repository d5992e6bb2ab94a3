#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace pigp {

// Exponents controlling refinement and capacity growth:
//   b = (d + 1) / (d + 2 nu),    q = d (d + 1) / (d (d + 2) + 2 nu).
// Defined for nu > 1; 0 < b < 1 and 0 < q < 1 there.
struct CoverConstants {
  double b;
  double q;
};
CoverConstants cover_constants(int dim, double nu);

// Axis-aligned cube [lower, lower + rho]^d with side rho = 2^-level / G,
// where G is the per-axis count of the initial grid.  Corners are stored as
// integer numerators over denom = G 2^level, so membership of grid points
// can be decided exactly and equal-rho cubes tile without gaps.
struct Hypercube {
  std::uint64_t id = 0;
  int dim = 0;
  int level = 0;
  int created_at = 0;
  std::int64_t denom = 1;               // G * 2^level
  std::vector<std::int64_t> lower_num;  // per-axis numerator, side = 1/denom

  double rho() const { return 1.0 / static_cast<double>(denom); }
  double lower(int axis) const {
    return static_cast<double>(lower_num[axis]) / static_cast<double>(denom);
  }

  // Closed-interval membership: lower_i <= x_i <= lower_i + rho on every
  // axis, so shared facets belong to all adjacent cubes.
  bool contains(std::span<const double> x) const;
};

// Exact membership for arm j of a g-point-per-axis grid (coordinate
// j/(g-1) per axis), decided in integer arithmetic so facet arms land in
// every adjacent cube with no floating point edge cases.
bool contains_grid_arm(const Hypercube& cube,
                       std::span<const std::int64_t> arm_axis_index,
                       std::int64_t points_per_axis);

// The 2^d equal children obtained by halving every side.  id/created_at are
// left unset; Cover::split assigns them.
std::vector<Hypercube> split_cube(const Hypercube& cube);

// Split threshold: true once rho^(-1/b) < n_points + 1.
bool should_split(const Hypercube& cube, std::size_t n_points, double b);

// Bound on how many elements can ever have existed by step t (initial grid
// plus all split offspring): ceil(4 (t+1)^(b d)).
std::int64_t capacity_bound(int t, double b, int dim);

// Set of active cubes.  Starts as the regular G^d grid with
// G = ceil(T^(q/d)) (or the single cube [0,1]^d), refined by split().
// Ids count up from zero and are never reused.
class Cover {
 public:
  static Cover initial(int horizon, int dim, double q,
                       bool single_cell = false);

  const std::vector<Hypercube>& active() const { return active_; }
  std::size_t history_count() const { return history_count_; }
  int grid_per_axis() const { return grid_per_axis_; }
  int dim() const { return dim_; }

  const Hypercube* find(std::uint64_t id) const;
  std::vector<std::uint64_t> containing(std::span<const double> x) const;

  // Replaces the cube with the given id by its 2^d children, created at
  // the given step, and returns copies of the children.
  std::vector<Hypercube> split(std::uint64_t id, int step);

 private:
  Cover() = default;
  std::vector<Hypercube> active_;  // kept sorted by id
  std::uint64_t next_id_ = 0;
  std::size_t history_count_ = 0;
  int grid_per_axis_ = 1;
  int dim_ = 0;
};

}  // namespace pigp
