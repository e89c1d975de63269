#pragma once

// Deterministic data parallelism: fixed contiguous chunks, results combined in
// chunk order so every reduction is independent of the worker count.

#include <cstddef>
#include <functional>
#include <vector>

namespace solab {

/// SOLAB_THREADS if set and positive, else hardware concurrency (at least 1).
unsigned worker_count();

/// Calls body(begin, end) on disjoint chunks covering [0, count).
void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body);

/// Sum of body(begin, end) over fixed chunks, added in chunk order.
double parallel_sum(std::size_t count, const std::function<double(std::size_t, std::size_t)>& body);

}  // namespace solab
