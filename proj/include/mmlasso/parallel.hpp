#pragma once

#include <cstddef>
#include <functional>

namespace mmlasso {

//! Run body(i) for i in [0, n) on up to `jobs` threads (0 = hardware
//! concurrency). Tasks must write only to their own slot of preallocated
//! output; with per-index derived RNG streams the result is identical to a
//! serial run. The first exception thrown by a task is rethrown.
void parallel_for(std::size_t n, int jobs,
                  const std::function<void(std::size_t)>& body);

int default_jobs();

}  // namespace mmlasso
