#pragma once

#include <Eigen/Dense>
#include <span>

#include "pigp/points.hpp"

namespace pigp {

// Isotropic Matern kernel on the unit hypercube, normalised so k(x, x) = 1.
// Closed forms exist for smoothness nu in {1/2, 3/2, 5/2}; those are the
// only values evaluate() accepts.
struct KernelSpec {
  double nu;
  double ell;
  int dim;

  KernelSpec(double nu_, double ell_, int dim_);
};

// k(x, x') with the sqrt(2 nu) r / ell argument convention, r Euclidean.
double matern_eval(const KernelSpec& k, std::span<const double> x,
                   std::span<const double> x2);

// Dense Gram matrix of a point set; symmetric, unit diagonal.
Eigen::MatrixXd gram_matrix(const KernelSpec& k, const PointSet& points);

// Spectral density of the kernel at angular frequency omega,
//   lambda(w) = C * (1 + (ell |w|)^2)^(-nu - d/2),
// with C = ell^d Gamma(nu + d/2) / (pi^(d/2) Gamma(nu)).  Valid for any
// nu > 0; exposed for analysis, feeds no runtime decision.
double spectral_density(const KernelSpec& k, std::span<const double> omega);

}  // namespace pigp
