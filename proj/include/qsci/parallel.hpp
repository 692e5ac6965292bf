#pragma once

#include <cstddef>
#include <functional>

namespace qsci {

/// Worker count from QSCI_NUM_THREADS (default 1). Results never depend on it.
std::size_t worker_count();

/// Overrides the environment for the current process; 0 restores the default.
void set_worker_count(std::size_t n);

/// Calls fn(i) for i in [0, n). Each index is visited exactly once; callers
/// write into per-index slots so output order is independent of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace qsci
