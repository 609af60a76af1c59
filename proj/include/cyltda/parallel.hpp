#pragma once

#include <cstdint>
#include <functional>

namespace cyltda {

/// Worker-pool size: CYLTDA_THREADS if set, else hardware concurrency.
int default_thread_count();

/// Runs fn(i) for i in [0, n) on a pool of `threads` workers. Callers keep
/// results in per-index slots, so output never depends on scheduling.
/// The first exception thrown by any worker is rethrown after the join.
void parallel_for(std::int64_t n, int threads, const std::function<void(std::int64_t)>& fn);

}  // namespace cyltda
