#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace emd::detail {

// Run fn(0..count-1) on up to `jobs` threads. Work items write to disjoint,
// pre-sized slots, so results do not depend on the job count.
inline void parallel_for(int jobs, size_t count, const std::function<void(size_t)>& fn) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || count <= 1) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
  };
  std::vector<std::thread> pool;
  const size_t n_threads = std::min<size_t>(jobs, count);
  pool.reserve(n_threads);
  for (size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace emd::detail
