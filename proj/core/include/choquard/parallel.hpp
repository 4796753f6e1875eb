#pragma once

#include <cstddef>
#include <functional>

namespace choquard {

/// Worker count used for data-parallel loops: hardware concurrency capped by
/// the CHOQUARD_THREADS environment variable. Thread count never affects
/// computed values, only speed.
int worker_count();

/// Runs fn(i) for i in [0, n) on worker_count() threads with a static
/// index split. fn must write to disjoint state per index.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace choquard
