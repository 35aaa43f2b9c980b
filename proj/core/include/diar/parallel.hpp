#pragma once

#include <cstddef>
#include <functional>

namespace diar {

/// Run fn(i) for every i in [0, n) on up to `jobs` threads (jobs <= 1 runs
/// inline). Blocks until all tasks finish. If tasks throw, the exception of
/// the LOWEST index is rethrown, so failure behavior does not depend on the
/// worker count.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

/// --jobs default: DIARIZE_JOBS env var if set and positive, else the
/// hardware concurrency (at least 1).
int default_jobs();

} // namespace diar
