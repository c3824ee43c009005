#ifndef SANDCUBE_PARALLEL_HPP_
#define SANDCUBE_PARALLEL_HPP_

#include <cstdint>
#include <functional>

namespace sandcube {

// Worker count from SANDCUBE_THREADS, else std::thread::hardware_concurrency.
int configured_threads();

// Resolves a requested thread count: values <= 0 mean configured_threads().
int resolve_threads(int requested);

// Splits [0, n) into contiguous chunks whose interior boundaries are
// multiples of `align` and runs body(begin, end) on up to `threads` threads.
// Chunks never get smaller than `min_chunk` sites. Exceptions from workers
// are rethrown on the calling thread.
void parallel_for(std::uint64_t n, int threads, std::uint64_t min_chunk, std::uint64_t align,
                  const std::function<void(std::uint64_t, std::uint64_t)>& body);

} // namespace sandcube

#endif
