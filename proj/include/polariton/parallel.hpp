#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace polariton {

inline unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs body(i) for i in [0, count) on up to `workers` threads. Each index is
// handled exactly once; callers write into pre-sized slots so the result is
// independent of scheduling. The first exception thrown is rethrown after all
// workers have joined.
template <class Body>
void parallel_for(std::size_t count, unsigned workers, Body&& body) {
  const unsigned n_threads =
      static_cast<unsigned>(std::min<std::size_t>(resolve_workers(workers), count));
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto run = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(n_threads);
  for (unsigned k = 0; k < n_threads; ++k) threads.emplace_back(run);
  for (auto& th : threads) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace polariton
