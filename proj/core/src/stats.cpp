#include "pigp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pigp {

std::vector<double> cumulative_sum(std::span<const double> v) {
  std::vector<double> out(v.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    acc += v[i];
    out[i] = acc;
  }
  return out;
}

std::vector<double> top_hat_smooth(std::span<const double> v,
                                   std::size_t window) {
  const std::size_t n = v.size();
  std::vector<double> out(n);
  if (n == 0) return out;
  if (window < 1) throw std::invalid_argument("top_hat_smooth: empty window");
  if (n < window) window = std::max<std::size_t>(1, window / 2);
  if (n < window) window = n;

  // Window of length w centred at i covers [i - (w-1)/2, i + w/2],
  // truncated at the ends.
  const std::size_t back = (window - 1) / 2;
  const std::size_t fwd = window / 2;
  const std::vector<double> cum = cumulative_sum(v);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= back ? i - back : 0;
    const std::size_t hi = std::min(i + fwd, n - 1);
    const double sum = cum[hi] - (lo > 0 ? cum[lo - 1] : 0.0);
    out[i] = sum / static_cast<double>(hi - lo + 1);
  }
  return out;
}

double percentile(std::vector<double> sample, double p) {
  if (sample.empty()) throw std::invalid_argument("percentile: empty sample");
  if (p < 0.0 || p > 100.0) throw std::invalid_argument("percentile: bad p");
  std::sort(sample.begin(), sample.end());
  const double pos = p / 100.0 * static_cast<double>(sample.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= sample.size()) return sample.back();
  const double frac = pos - static_cast<double>(lo);
  return sample[lo] + frac * (sample[lo + 1] - sample[lo]);
}

double median(std::vector<double> sample) {
  return percentile(std::move(sample), 50.0);
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("loglog_slope: need >= 2 matched points");
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw std::invalid_argument("loglog_slope: inputs must be positive");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (sxx == 0.0) throw std::invalid_argument("loglog_slope: degenerate x");
  return sxy / sxx;
}

}  // namespace pigp
