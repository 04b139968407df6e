#pragma once

#include <functional>

namespace densepath {

// Worker pool size: DENSEPATH_THREADS when set (floored at 1), otherwise the
// hardware concurrency.
int worker_count();

// Runs fn(0..n-1) across the worker pool. Results must be written to
// per-index slots; the call returns after all indices finish. Exceptions are
// captured and rethrown on the calling thread.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace densepath
