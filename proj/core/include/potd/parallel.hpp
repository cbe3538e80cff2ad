#pragma once

#include <cstddef>
#include <functional>

namespace potd {

/// Worker count: POTD_NUM_THREADS if set and positive, otherwise the
/// hardware concurrency (at least 1).
std::size_t worker_count();

/// Runs body(0..count-1) across worker threads. Each index runs exactly
/// once; if any calls throw, the exception of the lowest failing index is
/// rethrown after all workers finish, so failures are reproducible.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace potd
