#pragma once

#include <algorithm>
#include <cstdint>
#include <future>
#include <vector>

namespace fairflow {

// Splits [0, count) into at most `jobs` contiguous chunks and runs `fn(begin,
// end)` for each, returning the per-chunk results in chunk order. Exact
// rational reduction is order-sensitive only for determinism, so callers merge
// the ordered results themselves.
template <typename Result, typename Fn>
std::vector<Result> run_chunked(std::int64_t count, int jobs, Fn fn) {
  jobs = std::max(1, jobs);
  if (count <= 0) return {};
  std::int64_t chunk_count = std::min<std::int64_t>(jobs, count);
  std::int64_t chunk_size = (count + chunk_count - 1) / chunk_count;

  if (chunk_count == 1) {
    std::vector<Result> out;
    out.push_back(fn(std::int64_t{0}, count));
    return out;
  }

  std::vector<std::future<Result>> futures;
  futures.reserve(static_cast<size_t>(chunk_count));
  for (std::int64_t begin = 0; begin < count; begin += chunk_size) {
    std::int64_t end = std::min(count, begin + chunk_size);
    futures.push_back(std::async(std::launch::async, [fn, begin, end] { return fn(begin, end); }));
  }
  std::vector<Result> out;
  out.reserve(futures.size());
  for (auto& f : futures) out.push_back(f.get());
  return out;
}

} // namespace fairflow
