#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace kinetra {

/// Worker count: KINETRA_THREADS caps it, hardware concurrency is the default.
inline int worker_count() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("KINETRA_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1) hw = std::min(hw, cap);
  }
  return hw;
}

/// Data-parallel map over [0, n): tasks must write to disjoint state.
/// Chunked by a shared atomic counter; degenerates to a plain loop when a
/// single worker is available.
template <class Fn>
void parallel_for(long n, Fn&& fn, long chunk = 1) {
  int workers = worker_count();
  if (workers <= 1 || n <= chunk) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto run = [&] {
    try {
      while (!failed.load(std::memory_order_relaxed)) {
        long begin = next.fetch_add(chunk);
        if (begin >= n) break;
        long end = std::min(begin + chunk, n);
        for (long i = begin; i < end; ++i) fn(i);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
      failed.store(true, std::memory_order_relaxed);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace kinetra
