#pragma once

#include <cstddef>
#include <functional>

namespace perbif {

/// Worker count: PERBIF_THREADS if set (>= 1), else the hardware concurrency.
unsigned thread_count();

/// Runs body(i) for i in [0, count) on up to thread_count() threads.
/// Indices are handed out dynamically; body must only write to slots it owns.
/// The first exception thrown by any body is rethrown after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace perbif
