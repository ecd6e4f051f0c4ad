#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace sparsepot::detail {

// Static round-robin split of [0, n) over `workers` threads. Each index is
// visited exactly once; callers write results by index, so the merged output
// does not depend on the worker count.
template <class Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  const std::size_t w = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers)));
  if (w <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(w);
  for (std::size_t t = 0; t < w; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += w) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace sparsepot::detail
