#include "graphla/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace graphla {

namespace {
std::atomic<int> g_max_threads{0};  // 0 = not set, use hardware count
}

void set_max_threads(int n) { g_max_threads.store(n < 1 ? 1 : n); }

int max_threads() {
  int n = g_max_threads.load();
  if (n > 0) return n;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(Eigen::Index n,
                  const std::function<void(Eigen::Index, Eigen::Index)>& fn) {
  if (n <= 0) return;
  const Eigen::Index workers =
      std::min<Eigen::Index>(max_threads(), n);
  if (workers <= 1) {
    fn(0, n);
    return;
  }
  const Eigen::Index chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (Eigen::Index w = 0; w < workers; ++w) {
    const Eigen::Index begin = w * chunk;
    const Eigen::Index end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace graphla
