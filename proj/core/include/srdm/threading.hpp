#pragma once

#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace srdm {

/// Static-partition parallel loop: worker t handles the contiguous index
/// range [t*n/T, (t+1)*n/T). The assignment depends only on (n, threads),
/// so results that are written per-index are reproducible for a fixed
/// thread count. threads <= 1 runs inline.
template <class Fn>
void parallel_for(int64_t n, int threads, Fn&& fn) {
  if (n <= 0) return;
  if (threads <= 1 || n == 1) {
    for (int64_t i = 0; i < n; ++i) fn(i, 0);
    return;
  }
  const int t_used = static_cast<int>(std::min<int64_t>(threads, n));
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errs(static_cast<size_t>(t_used));
  pool.reserve(static_cast<size_t>(t_used));
  for (int t = 0; t < t_used; ++t) {
    pool.emplace_back([&, t]() {
      const int64_t lo = n * t / t_used;
      const int64_t hi = n * (t + 1) / t_used;
      try {
        for (int64_t i = lo; i < hi; ++i) fn(i, t);
      } catch (...) {
        errs[static_cast<size_t>(t)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errs) {
    if (e) std::rethrow_exception(e);
  }
}

/// Thread count to use: explicit value, or hardware concurrency when 0.
inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace srdm
