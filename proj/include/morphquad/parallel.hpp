#pragma once

#include <cstddef>
#include <future>
#include <thread>
#include <vector>

namespace morph {

/// Runs fn(0..count-1) across hardware threads. Callers own disjoint
/// output slots per index, so results are identical to a serial loop.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::future<void>> futures;
  futures.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    futures.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < count; i += workers) fn(i);
    }));
  }
  for (auto& f : futures) f.get();
}

}  // namespace morph
