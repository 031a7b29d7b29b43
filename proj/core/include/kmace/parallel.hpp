#pragma once

#include <cstddef>
#include <functional>

namespace kmace {

/// Worker-thread budget: KMACE_THREADS when set (minimum 1), otherwise the
/// hardware concurrency.
int thread_budget();

/// Run fn(0..count-1) across the thread budget. Each index must write only
/// its own output slot; results are then independent of the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace kmace
