#pragma once

#include <cstddef>

namespace cppm {

/// Runs body(i) for i in [0, n). threads <= 1 is a plain serial loop; larger
/// values use a static OpenMP schedule. Bodies must write disjoint data.
template <class Body>
void parallel_for(std::size_t n, int threads, Body&& body) {
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const long long m = static_cast<long long>(n);
#pragma omp parallel for schedule(static) num_threads(threads)
  for (long long i = 0; i < m; ++i) body(static_cast<std::size_t>(i));
}

}  // namespace cppm
