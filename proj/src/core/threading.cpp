#include "fkfp/core/threading.hpp"

#include <algorithm>

namespace fkfp {
namespace {
std::atomic<int> g_threads{0};  // 0 = not set yet
}

int max_threads() {
  int t = g_threads.load(std::memory_order_relaxed);
  if (t > 0) return t;
  unsigned hw = std::thread::hardware_concurrency();
  t = static_cast<int>(std::min(hw ? hw : 1u, 8u));
  g_threads.store(t, std::memory_order_relaxed);
  return t;
}

void set_max_threads(int n) { g_threads.store(std::max(1, n), std::memory_order_relaxed); }

}  // namespace fkfp
