#pragma once

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace pointproc {

// Run f(0) .. f(n-1) on up to `threads` workers.  Callers keep determinism
// by writing into per-index slots and reducing in index order afterwards.
// The first exception thrown by any worker is rethrown on the caller.
template <class F>
void parallel_for(int n, int threads, F&& f) {
  if (threads < 1) threads = 1;
  if (threads > n) threads = n;
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      int i;
      while (!failed.load(std::memory_order_relaxed) &&
             (i = next.fetch_add(1)) < n) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          failed.store(true);
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace pointproc
