#ifndef ERT_PARALLEL_HPP
#define ERT_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ert {

// Runs body(i) for i in [0, count) on up to `workers` threads. Each worker owns
// a contiguous block of indices; workers <= 1 runs inline. The first exception
// thrown by any worker is rethrown on the calling thread.
template <class Body>
void parallel_for(std::size_t count, int workers, Body&& body) {
  const std::size_t nw = std::min<std::size_t>(std::max(workers, 1), std::max<std::size_t>(count, 1));
  if (nw <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(nw);
  const std::size_t block = (count + nw - 1) / nw;
  for (std::size_t w = 0; w < nw; ++w) {
    const std::size_t lo = w * block;
    const std::size_t hi = std::min(count, lo + block);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace ert

#endif  // ERT_PARALLEL_HPP
