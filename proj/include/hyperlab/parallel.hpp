#pragma once

#include <cstddef>
#include <functional>

namespace hyperlab {

/// Worker cap: HYPERLAB_THREADS if set and positive, else the hardware
/// concurrency (at least 1).
std::size_t worker_count();

/// Run body(i) for i in [0, count) on up to worker_count() threads.  Each
/// index runs exactly once; the first exception thrown is rethrown after
/// all workers have joined.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace hyperlab
