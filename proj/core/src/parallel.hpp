#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace tmep::detail {

/// Calls f(i) for i in [0, count) on up to `threads` threads. Callers write
/// results into slot i so ordering never depends on scheduling.
template <class F>
void parallel_for(std::size_t count, unsigned threads, F&& f) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      f(i);
    }
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += threads) {
        f(i);
      }
    });
  }
  for (auto& t : pool) {
    t.join();
  }
}

} // namespace tmep::detail
