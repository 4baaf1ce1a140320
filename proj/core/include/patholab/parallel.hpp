#pragma once

#include <cstddef>
#include <functional>

namespace patholab {

// Worker cap from PATHOLAB_THREADS (clamped to [1, hardware]), read once.
int max_threads();

// Runs fn(i) for i in [0, count) on up to max_threads() workers.  Each index
// writes only its own output slot, so results do not depend on the thread
// count or schedule.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace patholab
