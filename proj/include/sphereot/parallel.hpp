#pragma once

#include <cstddef>
#include <functional>

namespace sphereot {

// Worker count: SPHEREOT_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

// Calls body(i) for i in [0, n). Iterations are split into contiguous
// blocks; body must only write to state owned by index i. Exceptions from
// workers are rethrown on the calling thread (the first one wins).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace sphereot
