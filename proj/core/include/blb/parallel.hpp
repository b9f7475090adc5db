#pragma once

#include <cstddef>
#include <functional>

namespace blb {

// Effective worker count: hardware concurrency capped by the BLB_THREADS
// environment variable (values < 1 are treated as 1).
unsigned effective_threads();

// Runs fn(i) for i in [0, n).  Work is sharded by index; callers write
// results into pre-sized slots so the outcome is bitwise identical for any
// worker count.  Runs inline when n is small or one worker is available.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace blb
