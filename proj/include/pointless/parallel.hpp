#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace pointless {

/// Splits [0, n) into `jobs` contiguous ranges, runs `body(begin, end)` on
/// each (in worker threads when jobs > 1) and sums the results.
template <typename Body>
std::uint64_t parallel_sum(std::uint64_t n, unsigned jobs, Body body) {
  jobs = std::max(1U, jobs);
  if (jobs == 1 || n < 4096) return body(std::uint64_t{0}, n);
  std::vector<std::uint64_t> partial(jobs, 0);
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  const std::uint64_t chunk = (n + jobs - 1) / jobs;
  for (unsigned j = 0; j < jobs; ++j) {
    const std::uint64_t begin = std::min(n, j * chunk);
    const std::uint64_t end = std::min(n, begin + chunk);
    workers.emplace_back([&, j, begin, end] { partial[j] = body(begin, end); });
  }
  for (auto& w : workers) w.join();
  std::uint64_t total = 0;
  for (std::uint64_t v : partial) total += v;
  return total;
}

}  // namespace pointless
