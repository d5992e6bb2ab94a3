#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pigp {

// Running sums: out[i] = v[0] + ... + v[i].
std::vector<double> cumulative_sum(std::span<const double> v);

// Centred moving average with a top-hat window of the given length.  When
// the input is shorter than the window, the window falls back to half the
// input length.  Edge positions average over the part of the window that
// exists.
std::vector<double> top_hat_smooth(std::span<const double> v,
                                   std::size_t window);

// Linear-interpolation percentile (p in [0, 100]) of an unsorted sample.
double percentile(std::vector<double> sample, double p);
double median(std::vector<double> sample);

// Least-squares slope of log(y) against log(x); all inputs must be > 0.
double loglog_slope(std::span<const double> x, std::span<const double> y);

// Map items[0..n) through fn on up to jobs worker threads.  Results land
// by index, so the output does not depend on scheduling; exceptions are
// rethrown after all workers finish.
template <class T, class Fn>
auto parallel_map(const std::vector<T>& items, Fn fn, unsigned jobs)
    -> std::vector<decltype(fn(items[0]))>;

}  // namespace pigp

#include "pigp/stats_impl.hpp"
