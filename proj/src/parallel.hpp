#pragma once

#include <cstddef>
#include <functional>

namespace gprc {

// Number of worker threads: explicit request > GPRC_THREADS > hardware count.
int resolve_thread_count(int requested);

// Runs body(i) for i in [0, count) across the given number of threads.  The
// first exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace gprc
