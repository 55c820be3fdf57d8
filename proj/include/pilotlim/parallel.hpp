#pragma once

#include <cstddef>
#include <functional>

namespace pilotlim {

/// Worker count: PILOTLIM_THREADS if set (>= 1), else hardware concurrency.
std::size_t worker_count();

/// Calls body(i) for i in [0, n) across worker_count() threads. Each index is
/// visited exactly once; results must be written to per-index slots.
/// The first exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace pilotlim
