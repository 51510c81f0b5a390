#ifndef COMLAB_PARALLEL_HPP
#define COMLAB_PARALLEL_HPP

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace comlab {

// Runs fn(i) for i in [0, count). Work items must be independent; callers
// that collect results write them into pre-sized slots indexed by i so the
// output is identical for any thread count.
inline void parallel_for(std::size_t count, int threads,
                         const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

inline int default_thread_count() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

}  // namespace comlab

#endif
