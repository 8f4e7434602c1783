#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace chaosmarket {

/**
 * Calls fn(i) for i in [0, count) on up to `threads` worker threads.
 * Work is split into contiguous blocks; fn must only write to slot i of
 * caller-owned storage so results do not depend on the thread count.
 * The first exception thrown by any worker is rethrown.
 */
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(count, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t block = (count + workers - 1) / workers;
  for (std::size_t k = 0; k < workers; ++k) {
    pool.emplace_back([&, k] {
      try {
        const std::size_t end = std::min(count, (k + 1) * block);
        for (std::size_t i = k * block; i < end; ++i) fn(i);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace chaosmarket
