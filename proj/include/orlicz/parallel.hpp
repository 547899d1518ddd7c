#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace orlicz::detail {

inline unsigned worker_count() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  return hw > 8 ? 8u : hw;
}

/// Runs fn(begin, end) over fixed-size chunks of [0, n). Chunk boundaries do
/// not depend on the thread count, so per-chunk results can be combined in
/// chunk order to give bit-identical totals on any machine load.
template <class Fn>
void for_chunks(std::size_t n, std::size_t chunk, Fn&& fn) {
  if (n == 0) return;
  const std::size_t nchunks = (n + chunk - 1) / chunk;
  unsigned workers = worker_count();
  if (workers <= 1 || nchunks <= 1) {
    for (std::size_t c = 0; c < nchunks; ++c)
      fn(c, c * chunk, std::min(n, (c + 1) * chunk));
    return;
  }
  std::atomic<std::size_t> next{0};
  auto body = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= nchunks) return;
      fn(c, c * chunk, std::min(n, (c + 1) * chunk));
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
}

/// Deterministic parallel reduction: per-chunk partial sums combined in chunk
/// order.
template <class Fn>
double sum_over(std::size_t n, Fn&& term) {
  constexpr std::size_t kChunk = 4096;
  const std::size_t nchunks = n == 0 ? 0 : (n + kChunk - 1) / kChunk;
  std::vector<double> partial(nchunks, 0.0);
  for_chunks(n, kChunk, [&](std::size_t c, std::size_t b, std::size_t e) {
    double s = 0.0;
    for (std::size_t i = b; i < e; ++i) s += term(i);
    partial[c] = s;
  });
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

}  // namespace orlicz::detail
