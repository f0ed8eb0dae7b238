#pragma once

#include <cstddef>
#include <functional>

namespace bellkit {

// BELLKIT_THREADS when set to a positive integer, else the hardware
// concurrency (at least 1).
unsigned default_thread_count();

// Calls body(i) for i in [0, n) on up to `threads` workers. Indices are
// handed out in contiguous blocks; the first exception thrown is rethrown.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace bellkit
