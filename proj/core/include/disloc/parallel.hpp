#pragma once

#include <algorithm>
#include <cstddef>
#include <future>
#include <vector>

namespace disloc {

/// Worker budget: DISLOC_WORKERS if set, otherwise hardware concurrency.
int default_workers();

/// Splits [0, n) into at most `workers` contiguous chunks, runs fn(begin, end)
/// on each (in parallel), and returns the per-chunk results in chunk order so
/// that reductions can be finalized deterministically.
template <class R, class Fn>
std::vector<R> run_chunked(std::size_t n, int workers, Fn&& fn) {
  workers = std::max(workers, 1);
  const std::size_t chunks =
      std::min<std::size_t>(static_cast<std::size_t>(workers), std::max<std::size_t>(n, 1));
  std::vector<R> results;
  results.reserve(chunks);
  if (chunks <= 1) {
    results.push_back(fn(std::size_t{0}, n));
    return results;
  }
  const std::size_t base = n / chunks;
  const std::size_t rem = n % chunks;
  std::vector<std::future<R>> futures;
  futures.reserve(chunks);
  std::size_t begin = 0;
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t len = base + (c < rem ? 1 : 0);
    const std::size_t end = begin + len;
    futures.push_back(std::async(std::launch::async,
                                 [&fn, begin, end] { return fn(begin, end); }));
    begin = end;
  }
  for (auto& f : futures) results.push_back(f.get());
  return results;
}

} // namespace disloc
