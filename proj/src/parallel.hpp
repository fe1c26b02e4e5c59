#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace jumpsde::detail {

inline unsigned resolve_parallelism(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs fn(i) for i in [0, n) on up to `parallelism` threads. Returns the
// smallest failing index and its exception, or n and null, so the outcome
// does not depend on scheduling.
template <typename Fn>
std::pair<std::size_t, std::exception_ptr> for_each_index(std::size_t n,
                                                          unsigned parallelism,
                                                          Fn&& fn) {
  std::vector<std::exception_ptr> failures(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const unsigned threads =
      static_cast<unsigned>(std::min<std::size_t>(resolve_parallelism(parallelism), n));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (failures[i]) return {i, failures[i]};
  }
  return {n, nullptr};
}

}  // namespace jumpsde::detail
