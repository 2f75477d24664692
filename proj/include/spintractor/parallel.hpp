#pragma once

#include <cstddef>
#include <functional>

namespace spintractor {

/// Worker count: SPINTRACTOR_THREADS if set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
unsigned thread_count();

/// Runs body(i) for i in [0, count) on up to thread_count() threads. Each index
/// runs exactly once; the first exception is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace spintractor
