#include "pigp/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace pigp {

namespace {

constexpr double kHalf = 0.5;
constexpr double kThreeHalves = 1.5;
constexpr double kFiveHalves = 2.5;

bool is_supported_nu(double nu) {
  return nu == kHalf || nu == kThreeHalves || nu == kFiveHalves;
}

double sq_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace

KernelSpec::KernelSpec(double nu_, double ell_, int dim_)
    : nu(nu_), ell(ell_), dim(dim_) {
  if (!(ell > 0.0)) throw std::invalid_argument("KernelSpec: ell must be > 0");
  if (!(nu > 0.0)) throw std::invalid_argument("KernelSpec: nu must be > 0");
  if (dim < 1) throw std::invalid_argument("KernelSpec: dim must be >= 1");
}

double matern_eval(const KernelSpec& k, std::span<const double> x,
                   std::span<const double> x2) {
  if (static_cast<int>(x.size()) != k.dim ||
      static_cast<int>(x2.size()) != k.dim)
    throw std::invalid_argument("matern_eval: point dimension mismatch");
  if (!is_supported_nu(k.nu))
    throw std::invalid_argument(
        "matern_eval: closed form requires nu in {0.5, 1.5, 2.5}");

  const double r = std::sqrt(sq_dist(x, x2));
  const double u = std::sqrt(2.0 * k.nu) * r / k.ell;
  if (k.nu == kHalf) return std::exp(-u);
  if (k.nu == kThreeHalves) return (1.0 + u) * std::exp(-u);
  return (1.0 + u + u * u / 3.0) * std::exp(-u);
}

Eigen::MatrixXd gram_matrix(const KernelSpec& k, const PointSet& points) {
  if (points.dim() != k.dim)
    throw std::invalid_argument("gram_matrix: point dimension mismatch");
  const Eigen::Index n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    g(i, i) = 1.0;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double v = matern_eval(k, points[i], points[j]);
      g(i, j) = v;
      g(j, i) = v;
    }
  }
  return g;
}

double spectral_density(const KernelSpec& k, std::span<const double> omega) {
  if (static_cast<int>(omega.size()) != k.dim)
    throw std::invalid_argument("spectral_density: frequency dimension mismatch");
  const double d = static_cast<double>(k.dim);
  const double c = std::pow(k.ell, d) * std::tgamma(k.nu + d / 2.0) /
                   (std::pow(M_PI, d / 2.0) * std::tgamma(k.nu));
  double w2 = 0.0;
  for (double w : omega) w2 += w * w;
  return c * std::pow(1.0 + k.ell * k.ell * w2, -k.nu - d / 2.0);
}

}  // namespace pigp
