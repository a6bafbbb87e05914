#pragma once

#include <cstddef>
#include <functional>

namespace diskspace {

/// Worker count: the explicit override when set, else hardware concurrency
/// capped by DISKSPACE_THREADS.
std::size_t worker_count();

/// Sets the worker count for this process; 0 restores the default.
void set_worker_count(std::size_t n);

/// Runs body(i) for i in [0, n). Iterations must write to disjoint outputs;
/// callers reduce the results afterwards in index order, so the outcome does
/// not depend on the number of workers.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace diskspace
