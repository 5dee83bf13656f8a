#pragma once

#include <cstddef>
#include <functional>

namespace propsign {

// Thread budget for parallel kernels: PROPSIGN_THREADS caps the OpenMP
// default when set (clamped to >= 1).  Without OpenMP this is always 1.
int max_threads();

// Runs fn(i) for i in [0, n).  Iterations must be independent: each writes
// only its own slot, so results are identical to the serial loop bit for bit
// regardless of schedule.  `parallel = false` forces the serial reference
// path (kept for testing and benchmarks).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  bool parallel = true);

}  // namespace propsign
