#pragma once

#include <cstddef>
#include <functional>

namespace unprompt {

// Worker cap: UNPROMPT_THREADS when set (minimum 1), otherwise the hardware
// concurrency.
int worker_count();

// Run fn(0..n-1) across workers. Each index must touch only its own output
// slot; results are then independent of the thread count and the schedule,
// which keeps parallel evaluation bit-reproducible.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace unprompt
