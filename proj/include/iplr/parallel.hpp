#pragma once

#include <cstddef>
#include <functional>

namespace iplr {

// Worker cap shared by all parallel loops; 0 means hardware concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

// Runs body(chunk_begin, chunk_end, chunk_index) over [0, n) split into chunks
// whose boundaries depend only on n and grain, never on the thread count, so
// per-chunk partial results can be combined in a fixed order.
std::size_t chunk_count(std::size_t n, std::size_t grain);
void parallel_chunks(std::size_t n, std::size_t grain,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

}  // namespace iplr
