#pragma once

#include <cstddef>
#include <functional>

namespace gaplab {

/// Worker count from GAPLAB_WORKERS, else hardware concurrency (at least 1).
std::size_t default_workers();

/// Calls body(i) for every i in [0, count) on up to `workers` threads. Each
/// index runs exactly once; the first exception thrown (lowest index wins)
/// is rethrown after all workers join.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& body);

}  // namespace gaplab
