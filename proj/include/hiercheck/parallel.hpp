#ifndef HIERCHECK_PARALLEL_HPP
#define HIERCHECK_PARALLEL_HPP

#include <atomic>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace hiercheck {

namespace detail {
inline thread_local bool inside_parallel_region = false;
}

// Runs fn(0..n-1) over a small thread pool. Tasks must write only to their own
// output slots; results are then independent of the thread count. Nested calls
// run serially, so replicate-level parallelism does not multiply with
// group-level parallelism. The first task exception (lowest index) is
// rethrown after all threads join.
inline void parallel_for(int n, const std::function<void(int)>& fn, int threads = 0) {
  if (n <= 0) return;
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  if (threads > n) threads = n;

  if (threads == 1 || detail::inside_parallel_region) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }

  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      detail::inside_parallel_region = true;
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n) break;
        try {
          fn(i);
        } catch (...) {
          errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace hiercheck

#endif
