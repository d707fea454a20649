#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace spincond {

// Runs fn(i) for i in [0, count) across worker threads. Each index runs in
// exactly one thread and results are stored by index, so aggregation order
// never depends on scheduling.
template <typename T>
std::vector<T> parallel_map(int count, const std::function<T(int)>& fn) {
  std::vector<T> out(static_cast<size_t>(count));
  const int workers =
      std::max(1, std::min(count, static_cast<int>(std::thread::hardware_concurrency())));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) out[static_cast<size_t>(i)] = fn(i);
    return out;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (int i = w; i < count; i += workers) out[static_cast<size_t>(i)] = fn(i);
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace spincond
