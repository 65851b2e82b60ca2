#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace stabletilt {

/// Worker count: THREADS environment variable if set, else hardware_concurrency.
int worker_count();

/// Runs fn(i) for i in [0, n) on a static partition of the index range.
/// Work assignment depends only on (n, worker count), and callers write
/// results into index-addressed slots, so output never depends on thread
/// scheduling. The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// parallel_for producing a vector of per-index results.
template <class T, class Gen>
std::vector<T> parallel_map(std::size_t n, Gen&& gen) {
  std::vector<T> out(n);
  parallel_for(n, [&](std::size_t i) { out[i] = gen(i); });
  return out;
}

}  // namespace stabletilt
