#pragma once

#include <cstddef>
#include <functional>

namespace obench {

/// Worker count: OBENCH_THREADS when set to a positive integer, else the hardware concurrency.
std::size_t thread_count();

/// Runs body(i) for i in [0, n) on up to thread_count() threads. Each index is
/// handled exactly once; callers write results to per-index slots so output does
/// not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace obench
