#pragma once

// Index-parallel loop. Each task writes only its own output slot, so results
// do not depend on the thread count. CANAL_THREADS sets the worker count
// (default: hardware concurrency).

#include <cstddef>
#include <functional>

namespace canal {

int worker_count();

// Runs body(i) for i in [0, count). If any call throws, the exception from the
// lowest failing index is rethrown once every index has run.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace canal
