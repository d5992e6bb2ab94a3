#include "pigp/gp.hpp"

#include <cmath>
#include <stdexcept>

namespace pigp {

namespace {
// Positive floor for a Schur complement that numerical error pushed to or
// below zero.  Unreachable for alpha of practical size.
constexpr double kJitterFloor = 1e-12;
// A posterior variance below this is numerical noise and clamps to zero;
// anything more negative means the factor no longer matches the data.
constexpr double kVarianceSlack = 1e-10;
}  // namespace

GpState::GpState(const KernelSpec& kernel, double alpha)
    : kernel_(kernel), alpha_(alpha), x_(kernel.dim) {
  if (!(alpha > 0.0)) throw std::invalid_argument("GpState: alpha must be > 0");
}

std::span<const double> GpState::factor_row(std::size_t i) const {
  return {tri_.data() + i * (i + 1) / 2, i + 1};
}

void GpState::add_observation(std::span<const double> x, double y) {
  const std::size_t n = y_.size();

  // New packed row: first the kernel vector against the existing design,
  // then the in-place forward substitution L v = k.
  std::vector<double> row(n + 1);
  for (std::size_t i = 0; i < n; ++i) row[i] = matern_eval(kernel_, x_[i], x);
  const double kxx = matern_eval(kernel_, x, x);

  double vsq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::span<const double> li = factor_row(i);
    double acc = row[i];
    for (std::size_t j = 0; j < i; ++j) acc -= li[j] * row[j];
    row[i] = acc / li[i];
    vsq += row[i] * row[i];
  }

  double schur = kxx + alpha_ - vsq;
  if (schur <= kJitterFloor) {
    schur = kJitterFloor;
    ++jitter_events_;
  }
  row[n] = std::sqrt(schur);

  double zacc = y;
  for (std::size_t j = 0; j < n; ++j) zacc -= row[j] * z_[j];

  tri_.insert(tri_.end(), row.begin(), row.end());
  z_.push_back(zacc / row[n]);
  logdet_ += std::log(schur / alpha_);
  x_.push_back(x);
  y_.push_back(y);
}

PosteriorStats GpState::posterior(std::span<const double> x) const {
  const std::size_t n = y_.size();
  const double kxx = matern_eval(kernel_, x, x);
  if (n == 0) return {0.0, std::sqrt(kxx)};

  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = matern_eval(kernel_, x_[i], x);

  double mean = 0.0;
  double vsq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::span<const double> li = factor_row(i);
    double acc = v[i];
    for (std::size_t j = 0; j < i; ++j) acc -= li[j] * v[j];
    v[i] = acc / li[i];
    mean += v[i] * z_[i];
    vsq += v[i] * v[i];
  }

  double var = kxx - vsq;
  if (var < -kVarianceSlack)
    throw std::runtime_error("GpState: posterior variance went negative");
  if (var < 0.0) var = 0.0;
  return {mean, std::sqrt(var)};
}

double GpState::posterior_mean(std::span<const double> x) const {
  return posterior(x).mean;
}

double GpState::posterior_std(std::span<const double> x) const {
  return posterior(x).std;
}

double GpState::effective_dimension() const {
  const std::size_t n = y_.size();
  if (n == 0) return 0.0;

  // Tr(K (K + aI)^{-1}) = n - a Tr((L L^T)^{-1}) = n - a |L^{-1}|_F^2.
  // Column j of L^{-1} solves L w = e_j and only involves rows >= j.
  double frob = 0.0;
  std::vector<double> w(n);
  for (std::size_t col = 0; col < n; ++col) {
    for (std::size_t i = col; i < n; ++i) {
      const std::span<const double> li = factor_row(i);
      double acc = (i == col) ? 1.0 : 0.0;
      for (std::size_t j = col; j < i; ++j) acc -= li[j] * w[j];
      w[i] = acc / li[i];
      frob += w[i] * w[i];
    }
  }
  return static_cast<double>(n) - alpha_ * frob;
}

}  // namespace pigp
