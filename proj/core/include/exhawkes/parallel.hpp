#pragma once

#include <cstddef>
#include <functional>

namespace exhawkes {

/// Number of worker threads used by parallel_for. Defaults to the hardware
/// concurrency, capped by the EXPOSURE_HAWKES_THREADS environment variable
/// (read once, at first use). Always >= 1.
unsigned thread_limit();

/// Runs fn(i) for i in [0, n). Work is split into fixed-size chunks whose
/// layout depends only on n, so per-chunk results (and any caller-side
/// per-chunk reductions) are identical no matter how many threads run.
/// Nested calls degrade to sequential execution.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace exhawkes
