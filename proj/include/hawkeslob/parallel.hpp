#pragma once

#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace hawkeslob {

// --threads default: HAWKES_LOB_THREADS env var, else hardware concurrency.
inline int default_thread_count() {
  if (const char* env = std::getenv("HAWKES_LOB_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(begin, end, chunk) over a static partition of [0, count) into
// `threads` contiguous chunks. The partition depends only on (count, threads),
// so reductions that combine chunk results in chunk order are reproducible
// for a fixed thread count.
template <typename Fn>
void parallel_chunks(std::size_t count, int threads, Fn&& fn) {
  if (count == 0) return;
  const std::size_t n_chunks =
      threads <= 1 ? 1 : std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  if (n_chunks == 1) {
    fn(std::size_t{0}, count, std::size_t{0});
    return;
  }
  const std::size_t base = count / n_chunks;
  const std::size_t extra = count % n_chunks;
  std::vector<std::thread> pool;
  pool.reserve(n_chunks);
  std::size_t begin = 0;
  for (std::size_t c = 0; c < n_chunks; ++c) {
    const std::size_t len = base + (c < extra ? 1 : 0);
    const std::size_t end = begin + len;
    pool.emplace_back([&fn, begin, end, c] { fn(begin, end, c); });
    begin = end;
  }
  for (auto& t : pool) t.join();
}

}  // namespace hawkeslob
