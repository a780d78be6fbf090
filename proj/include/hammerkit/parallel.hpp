#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace hammerkit {
namespace detail {

// Worker cap from HKIT_THREADS; 0 or unset means hardware concurrency.
inline unsigned worker_count() {
  unsigned n = 0;
  if (const char* env = std::getenv("HKIT_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) n = static_cast<unsigned>(v);
  }
  if (n == 0) n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

/*
 * Runs fn(chunk_index) for chunk_index in [0, n_chunks). The chunk layout is
 * fixed, so results collected per chunk and merged in index order do not
 * depend on the number of workers.
 */
template <class F>
void parallel_chunks(std::size_t n_chunks, F&& fn) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(worker_count(), n_chunks));
  if (workers <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) fn(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t c = next.fetch_add(1);
        if (c >= n_chunks) return;
        fn(c);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail
}  // namespace hammerkit
