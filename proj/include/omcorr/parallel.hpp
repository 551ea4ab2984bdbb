#pragma once

#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace omcorr {

// Worker count for grid evaluations: OMCORR_THREADS if set to a positive
// integer, otherwise the hardware concurrency (at least 1).
inline int worker_count() {
  if (const char* env = std::getenv("OMCORR_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Run body(i) for i in [0, n) on a small worker pool.  Indices are handed out
// through a shared atomic counter, so the assignment of index to thread is
// nondeterministic but the work per index is not; callers write results into
// per-index slots to keep output independent of scheduling.  workers <= 0
// means "use worker_count()".  The first exception thrown by any body is
// rethrown on the calling thread after all workers finish.
template <typename Body>
void parallel_for(std::size_t n, Body&& body, int workers = 0) {
  if (n == 0) return;
  int count = workers > 0 ? workers : worker_count();
  if (static_cast<std::size_t>(count) > n) count = static_cast<int>(n);

  if (count <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  const auto run = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(count) - 1);
  for (int t = 1; t < count; ++t) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace omcorr
