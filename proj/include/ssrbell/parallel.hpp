#pragma once

#include <cstddef>
#include <functional>

namespace ssrbell {

// Worker count: `requested` if nonzero, else the SSRBELL_THREADS environment
// variable, else hardware concurrency.
unsigned worker_count(unsigned requested = 0);

// Runs fn(i) for i in [0, n) on up to `threads` workers.  Results must be
// written to preallocated per-index storage so reductions stay deterministic.
void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace ssrbell
