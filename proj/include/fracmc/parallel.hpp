#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace fracmc {

// Thread count policy: explicit set_thread_count() wins, then the
// FRACMC_THREADS environment variable, then hardware concurrency.
// Results never depend on the pool size: work is split into fixed blocks
// whose partial results are reduced in block order.

inline int& thread_count_override() {
  static int count = 0;
  return count;
}

inline void set_thread_count(int n) { thread_count_override() = n; }

inline int resolve_thread_count() {
  if (thread_count_override() > 0) return thread_count_override();
  if (const char* env = std::getenv("FRACMC_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs fn(job_index) for job_index in [0, n_jobs).  Job outputs must go to
// preallocated per-job slots; the caller reduces them in index order.
inline void parallel_for(int64_t n_jobs,
                         const std::function<void(int64_t)>& fn) {
  const int threads =
      static_cast<int>(std::min<int64_t>(resolve_thread_count(), n_jobs));
  if (threads <= 1) {
    for (int64_t i = 0; i < n_jobs; ++i) fn(i);
    return;
  }
  std::atomic<int64_t> next{0};
  auto worker = [&] {
    for (;;) {
      const int64_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n_jobs) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads - 1);
  for (int t = 0; t < threads - 1; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

}  // namespace fracmc
