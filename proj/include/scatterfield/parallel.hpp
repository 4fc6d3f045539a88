#pragma once

#include <cstddef>
#include <functional>

namespace scatterfield {

/// Worker count from SCATTERFIELD_THREADS (0 or unset = hardware concurrency).
unsigned worker_count();

/// Runs task(i) for i in [0, count) on up to `workers` threads. Tasks must not
/// share mutable state; the first exception thrown is rethrown.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& task);

}  // namespace scatterfield
