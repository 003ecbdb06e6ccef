#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

// Deterministic work distribution: workers pull chunk indices from a shared
// counter, chunks write disjoint outputs, and any reduction is merged by the
// caller in chunk order. Results are bitwise independent of the thread count.

namespace fkfp {

int max_threads();
void set_max_threads(int n);  // n >= 1

template <class F>
void parallel_for(std::size_t n, F&& f) {
  const int nt = max_threads();
  if (nt <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr eptr;
  std::atomic_flag eptr_set = ATOMIC_FLAG_INIT;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n || failed.load(std::memory_order_relaxed)) return;
      try {
        f(i);
      } catch (...) {
        if (!eptr_set.test_and_set()) eptr = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int spawn = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(nt), n)) - 1;
  pool.reserve(spawn);
  for (int t = 0; t < spawn; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (eptr) std::rethrow_exception(eptr);
}

}  // namespace fkfp
