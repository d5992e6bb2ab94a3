#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace pigp {

template <class T, class Fn>
auto parallel_map(const std::vector<T>& items, Fn fn, unsigned jobs)
    -> std::vector<decltype(fn(items[0]))> {
  using R = decltype(fn(items[0]));
  std::vector<R> out(items.size());
  if (items.empty()) return out;

  jobs = std::max(1u, std::min<unsigned>(jobs, items.size()));
  if (jobs == 1) {
    for (std::size_t i = 0; i < items.size(); ++i) out[i] = fn(items[i]);
    return out;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= items.size()) return;
      try {
        out[i] = fn(items[i]);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace pigp
