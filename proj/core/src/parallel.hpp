#pragma once

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace foldframe::detail {

// Runs fn over contiguous chunks of [0, n). Work items are disjoint, so
// results do not depend on the thread count.
inline void parallel_for(std::int64_t n, int nthreads,
                         const std::function<void(std::int64_t, std::int64_t)>& fn) {
  if (n <= 0) return;
  if (nthreads <= 1 || n == 1) {
    fn(0, n);
    return;
  }
  int workers = static_cast<int>(std::min<std::int64_t>(nthreads, n));
  std::int64_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> threads;
  threads.reserve(static_cast<size_t>(workers));
  for (int t = 0; t < workers; ++t) {
    std::int64_t begin = t * chunk;
    std::int64_t end = std::min<std::int64_t>(begin + chunk, n);
    if (begin >= end) break;
    threads.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& th : threads) th.join();
}

}  // namespace foldframe::detail
