#pragma once

#include <cstddef>
#include <functional>

namespace simfdr {

// Worker count for parallel sections: `requested` if nonzero, else the
// SIMFDR_THREADS environment variable, else hardware concurrency (min 1).
unsigned resolve_worker_count(unsigned requested = 0);

// Run body(0..n-1) on up to `workers` threads. Callers make this
// deterministic by writing to index-addressed slots only; the worker count
// never influences results. The first exception thrown by any body is
// rethrown after all workers join.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body);

} // namespace simfdr
