#pragma once

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace dualcluster::parallel {

// Hard cap from the environment, applied on top of the caller's shard count.
inline int env_thread_cap() {
  if (const char* s = std::getenv("DUALCLUSTER_THREADS")) {
    const long v = std::strtol(s, nullptr, 10);
    if (v >= 1) return static_cast<int>(v);
  }
  return 1 << 16;
}

inline int effective_threads(int requested) {
  int t = requested < 1 ? 1 : requested;
  const int cap = env_thread_cap();
  if (t > cap) t = cap;
  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw > 0 && t > 4 * hw) t = 4 * hw;
  return t;
}

// Runs fn(task) for task = 0..tasks-1 on up to `threads` workers.
// Tasks are assigned statically (round robin), so any per-task outputs the
// caller collects can be reduced in task order; results then do not depend
// on the number of worker threads.
inline void run_tasks(std::uint64_t tasks, int threads,
                      const std::function<void(std::uint64_t)>& fn) {
  const int t = effective_threads(threads);
  if (t <= 1 || tasks <= 1) {
    for (std::uint64_t i = 0; i < tasks; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (int w = 0; w < t; ++w) {
    pool.emplace_back([&, w]() {
      for (std::uint64_t i = w; i < tasks; i += t) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace dualcluster::parallel
