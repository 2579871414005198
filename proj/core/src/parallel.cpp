#include "quadcurl/parallel.hpp"

#include <atomic>
#include <thread>
#include <vector>

namespace quadcurl {

namespace {
std::atomic<int> g_threads{0};  // 0 = use hardware concurrency
}

void set_num_threads(int n) { g_threads.store(n > 0 ? n : 0); }

int get_num_threads() {
  const int n = g_threads.load();
  if (n > 0) return n;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(int begin, int end, const std::function<void(int)>& fn) {
  const int n = end - begin;
  const int nthreads = std::min(get_num_threads(), n);
  if (n <= 0) return;
  if (nthreads <= 1) {
    for (int i = begin; i < end; ++i) fn(i);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(nthreads);
  for (int t = 0; t < nthreads; ++t) {
    const int lo = begin + static_cast<int>(std::int64_t(n) * t / nthreads);
    const int hi = begin + static_cast<int>(std::int64_t(n) * (t + 1) / nthreads);
    workers.emplace_back([lo, hi, &fn] {
      for (int i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& w : workers) w.join();
}

}  // namespace quadcurl
