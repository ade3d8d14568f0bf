#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace nnvqe {

/// Process-wide worker cap, set once by the CLI's --threads flag.
/// Defaults to 1: runs are then fully serial and trivially deterministic.
inline int& thread_cap() {
  static int cap = 1;
  return cap;
}

/// Static contiguous split of [0, count) over at most `threads` workers
/// (thread_cap() when threads == 0). Results must be written to per-index
/// slots by the body; any ordered reduction stays with the caller, so the
/// split never changes numerics.
inline void parallel_for(std::size_t count,
                         const std::function<void(std::size_t)>& body,
                         int threads = 0) {
  if (threads <= 0) threads = thread_cap();
  if (threads < 1) threads = 1;
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(threads), count);

  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }

  std::mutex err_mutex;
  std::exception_ptr first_error;
  auto run_chunk = [&](std::size_t lo, std::size_t hi) {
    try {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(err_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    if (lo >= count) break;
    pool.emplace_back(run_chunk, lo, std::min(count, lo + chunk));
  }
  run_chunk(0, std::min(count, chunk));
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace nnvqe
