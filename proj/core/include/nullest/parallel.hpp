#pragma once

#include <cstddef>
#include <functional>

namespace nullest {

// Number of worker threads used by parallel_for. Defaults to the hardware
// concurrency, capped by the NULL_EST_THREADS environment variable.
std::size_t worker_count();

// Overrides worker_count() for the whole process; 0 restores the default.
void set_worker_count(std::size_t workers);

// Runs body(i) for i in [0, count). Each index runs exactly once; callers
// write results into index-addressed slots so the outcome is independent of
// the schedule. Nested calls run sequentially on the calling thread. If any
// body throws, the exception from the lowest failing index is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace nullest
