#include "sandcube/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace sandcube {

int configured_threads() {
  if (const char* env = std::getenv("SANDCUBE_THREADS")) {
    try {
      int n = std::stoi(env);
      if (n > 0)
        return n;
    } catch (const std::exception&) {
      // fall through to the hardware default
    }
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

int resolve_threads(int requested) {
  return requested > 0 ? requested : configured_threads();
}

void parallel_for(std::uint64_t n, int threads, std::uint64_t min_chunk, std::uint64_t align,
                  const std::function<void(std::uint64_t, std::uint64_t)>& body) {
  if (n == 0)
    return;
  align = std::max<std::uint64_t>(align, 1);
  min_chunk = std::max<std::uint64_t>(min_chunk, 1);
  std::uint64_t workers = std::max(1, threads);
  workers = std::min<std::uint64_t>(workers, std::max<std::uint64_t>(1, n / min_chunk));
  if (workers <= 1) {
    body(0, n);
    return;
  }

  std::uint64_t chunk = (n + workers - 1) / workers;
  chunk = (chunk + align - 1) / align * align;

  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::uint64_t w = 1; w < workers; ++w) {
    std::uint64_t begin = w * chunk;
    if (begin >= n)
      break;
    std::uint64_t end = std::min(n, begin + chunk);
    pool.emplace_back([&, w, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  try {
    body(0, std::min(n, chunk));
  } catch (...) {
    errors[0] = std::current_exception();
  }
  for (auto& t : pool)
    t.join();
  for (auto& e : errors)
    if (e)
      std::rethrow_exception(e);
}

} // namespace sandcube
