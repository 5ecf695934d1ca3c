#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace csg {

/// Resolves a thread-count request: 0 means available parallelism.
inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

/// Runs fn(chunk_index, begin, end) over [0, n) split into contiguous
/// chunks, one per worker. Chunk boundaries depend only on (n,
/// threads); callers that write per-chunk results and combine them in
/// chunk order get output independent of the thread count.
template <class Fn>
void parallel_chunks(std::size_t n, int threads, Fn&& fn) {
  threads = resolve_threads(threads);
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(threads), n ? n : 1);
  if (workers <= 1) {
    fn(std::size_t{0}, std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::exception_ptr first_error;
  std::mutex error_mu;
  const std::size_t base = n / workers, extra = n % workers;
  std::size_t begin = 0;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t len = base + (w < extra ? 1 : 0);
    pool.emplace_back([&, w, begin, len] {
      try {
        fn(w, begin, begin + len);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
      }
    });
    begin += len;
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

} // namespace csg
