#pragma once

#include <cstddef>
#include <functional>

namespace geoc {

/// Number of worker threads to use when the caller passes 0.
unsigned default_thread_count();

// Runs body(i) for i in [0, count) on up to `threads` workers. Indices are
// handed out in contiguous chunks; body must only write state owned by i, which
// makes results independent of the thread count. The first exception thrown by
// any worker is rethrown on the calling thread.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace geoc
