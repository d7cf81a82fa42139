#pragma once

#include <cstddef>
#include <functional>

namespace cvqt {

/// Thread count from CVQT_THREADS, else the hardware concurrency (at least 1).
int default_thread_count();

/// Calls fn(i) for i in [0, n) across `threads` workers (0 = default).
/// Work is split into fixed contiguous chunks so any per-index output is
/// independent of scheduling. The exception thrown at the lowest index, if
/// any, is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, int threads = 0);

} // namespace cvqt
