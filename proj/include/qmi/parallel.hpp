#pragma once

#include <atomic>
#include <thread>
#include <vector>

namespace qmi {

/// Runs fn(i) for i in [0, n) on up to `jobs` threads. Callers key all
/// randomness by i (derive_seed) and reduce by index, so results do not
/// depend on scheduling.
template <typename F>
void parallel_for(long n, int jobs, F&& fn) {
  if (jobs <= 1 || n <= 1) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  auto worker = [&] {
    for (;;) {
      const long i = next.fetch_add(1);
      if (i >= n) break;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  const int width = static_cast<int>(std::min<long>(jobs, n));
  pool.reserve(width);
  for (int t = 0; t < width; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace qmi
