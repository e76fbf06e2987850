#pragma once

#include <cstddef>
#include <functional>

namespace lightning {

// Worker count: hardware concurrency capped by LIGHTNING_THREADS when set.
int thread_count();

// Calls fn(i) for i in [0, n) on up to thread_count() threads. Each index is
// visited exactly once; callers write results into per-index slots.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace lightning
