#pragma once

#include <cstddef>
#include <functional>

namespace nefb {

/// Process-wide cap on worker threads used by the compute kernels (default 1).
void set_worker_count(std::size_t workers);
std::size_t worker_count();

/// Calls `body(begin, end)` on disjoint contiguous chunks covering [0, count).
/// Chunks run on up to worker_count() threads; results must be written to
/// disjoint locations so that the outcome does not depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace nefb
