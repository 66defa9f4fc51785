#pragma once

#include <cstddef>
#include <functional>

namespace fluxlattice {

/// Worker count for sweep parallelism: min(hardware threads, n), capped by
/// the FLUXLATTICE_THREADS environment variable when set.
std::size_t worker_count(std::size_t n);

/// Runs fn(i) for i in [0, n) on worker_count(n) threads. Callers must write
/// results by index; iteration order within a worker is ascending, so output
/// is deterministic regardless of thread count. Exceptions are captured and
/// rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace fluxlattice
