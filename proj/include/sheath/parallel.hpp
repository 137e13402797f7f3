#pragma once

#include <functional>

namespace sheath {

/// Number of worker threads for data-parallel loops. Read once from the
/// SHEATHSIM_THREADS environment variable (default 1) unless overridden.
int thread_count();

/// Overrides the thread count for the rest of the process; n <= 0 restores
/// the environment default.
void set_thread_count(int n);

/// Splits [0, n) into contiguous chunks, one per worker, and calls
/// body(begin, end) for each. Chunks are disjoint, so results are
/// independent of the thread count as long as body only writes its range.
void parallel_for(long n, const std::function<void(long, long)>& body);

} // namespace sheath
