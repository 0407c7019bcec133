#pragma once

#include <cstddef>
#include <functional>

namespace ktinv {

/// Worker count: hardware concurrency, capped by KT_INVARIANTS_THREADS when set.
unsigned worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads, each thread
/// taking a contiguous block. The exception of the lowest failing index is
/// rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace ktinv
