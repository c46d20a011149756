#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace bic1d {

// Worker count for scans: BIC1D_THREADS if set to a positive integer,
// otherwise std::thread::hardware_concurrency().
unsigned scan_threads();

// Runs body(i) for i in [0, n) over contiguous blocks, one block per worker.
// Results must be written to per-index slots by the caller so that output
// order never depends on scheduling. The first exception thrown by any worker
// is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace bic1d
