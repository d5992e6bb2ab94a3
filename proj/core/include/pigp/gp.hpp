#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pigp/kernel.hpp"
#include "pigp/points.hpp"

namespace pigp {

struct PosteriorStats {
  double mean;
  double std;
};

// Kernel ridge regression state over an append-only data set.
//
// Holds a packed Cholesky factor L of (K + alpha I) that grows one row per
// observation in O(n^2), the whitened observations z = L^{-1} y, and a
// running log determinant of (I + alpha^{-1} K).  Adding an observation
// never touches existing rows, so snapshots taken by value stay valid.
class GpState {
 public:
  GpState(const KernelSpec& kernel, double alpha);

  // Appends (x, y).  The updated posterior matches a from-scratch fit on
  // the extended data set.
  void add_observation(std::span<const double> x, double y);

  // Posterior mean and standard deviation at a probe point.  On an empty
  // state these are 0 and sqrt(k(x, x)) = 1.
  PosteriorStats posterior(std::span<const double> x) const;
  double posterior_mean(std::span<const double> x) const;
  double posterior_std(std::span<const double> x) const;

  // Information gain (1/2) log det(I + alpha^{-1} K); 0 when empty.
  double information_gain() const { return 0.5 * logdet_; }
  double log_det() const { return logdet_; }

  // Effective dimension Tr(K (K + alpha I)^{-1}); 0 when empty.
  double effective_dimension() const;

  std::size_t size() const { return y_.size(); }
  double alpha() const { return alpha_; }
  const KernelSpec& kernel() const { return kernel_; }
  const PointSet& design_points() const { return x_; }
  const std::vector<double>& observations() const { return y_; }

  // Count of Schur complements clamped to keep the factor positive.  Stays
  // zero whenever alpha is not vanishingly small.
  int jitter_events() const { return jitter_events_; }

  // Row i of the packed factor (i + 1 entries) and the whitened
  // observation vector.  The bandit loop keeps per-arm posteriors in sync
  // with these to avoid re-solving against every arm each step.
  std::span<const double> factor_row(std::size_t i) const;
  std::span<const double> whitened_observations() const { return z_; }

 private:
  KernelSpec kernel_;
  double alpha_;
  PointSet x_;
  std::vector<double> y_;
  std::vector<double> tri_;  // rows of L, packed: row i at offset i(i+1)/2
  std::vector<double> z_;    // L^{-1} y
  double logdet_ = 0.0;
  int jitter_events_ = 0;
};

}  // namespace pigp
