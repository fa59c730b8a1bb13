#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace quantcap::detail {

// Runs fn(i) for i in [0, n). Work items must be independent; callers keep
// results ordered by index so the schedule never shows in the output.
template <class F>
void parallel_for(std::size_t n, F&& fn) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(hw, n));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace quantcap::detail
