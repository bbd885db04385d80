#pragma once

#include <cstddef>
#include <functional>

namespace stepflow {

/// hardware_concurrency, capped by STEPFLOW_THREADS when set.
unsigned worker_count();

/// Calls fn(i) for i in [0, n) on up to worker_count() threads. Iterations
/// must not share mutable state; the first exception is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace stepflow
