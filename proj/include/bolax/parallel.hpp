#pragma once

#include <atomic>
#include <thread>
#include <vector>

namespace bolax {

/// Global worker count for parallel_for; 0 means hardware concurrency.
/// Set once by the CLI before any computation.
inline int& thread_count() {
  static int n = 1;
  return n;
}

/// Runs f(i) for i in [0, n). Each index writes only its own output slot, so
/// results are independent of scheduling.
template <class F>
void parallel_for(long n, const F& f) {
  int workers = thread_count();
  if (workers == 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers <= 1 || n < 2) {
    for (long i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (long i = next.fetch_add(1); i < n; i = next.fetch_add(1)) f(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace bolax
