#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace hrg {

// Runs fn(0..count-1) across up to `threads` workers. Tasks must write to
// disjoint slots; the first exception is rethrown after all workers join.
inline void parallel_for(long long count, int threads,
                         const std::function<void(long long)>& fn) {
  if (count <= 0) return;
  if (threads <= 1 || count == 1) {
    for (long long i = 0; i < count; ++i) fn(i);
    return;
  }
  int workers = static_cast<int>(std::min<long long>(threads, count));
  std::atomic<long long> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        long long i = next.fetch_add(1);
        if (i >= count || failed.load()) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          failed.store(true);
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

inline int default_thread_count() {
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace hrg
