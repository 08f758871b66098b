#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rqm {

// Runs fn(t) for t in [0, trials) on up to `workers` threads and returns the
// results in trial order. Each call must own its state; output does not
// depend on the worker count. workers == 0 uses the hardware concurrency.
template <typename Fn>
auto run_trials(std::size_t trials, Fn&& fn, std::size_t workers = 1)
    -> std::vector<decltype(fn(std::size_t{}))> {
  using result_t = decltype(fn(std::size_t{}));
  std::vector<result_t> results(trials);
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(trials, 1));
  if (workers <= 1) {
    for (std::size_t t = 0; t < trials; ++t) results[t] = fn(t);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t t = next++; t < trials; t = next++) {
        try {
          results[t] = fn(t);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace rqm
