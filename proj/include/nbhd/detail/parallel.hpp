#pragma once

#include <algorithm>
#include <atomic>
#include <limits>
#include <thread>
#include <vector>

namespace nbhd {

template <typename Scratch>
std::optional<std::uint64_t> parallel_find_first(
    std::uint64_t total, int jobs, const std::function<Scratch()>& make_scratch,
    const std::function<bool(std::uint64_t, Scratch&)>& pred) {
  constexpr std::uint64_t kNone = std::numeric_limits<std::uint64_t>::max();
  if (total == 0) return std::nullopt;
  jobs = std::max(1, jobs);
  if (jobs == 1) {
    Scratch scratch = make_scratch();
    for (std::uint64_t i = 0; i < total; ++i) {
      if (pred(i, scratch)) return i;
    }
    return std::nullopt;
  }

  // Chunks are claimed in increasing order; a chunk starting above the best
  // hit so far is skipped, so every chunk below the final answer is scanned.
  const std::uint64_t chunk = std::max<std::uint64_t>(1, std::min<std::uint64_t>(4096, total / (16 * jobs) + 1));
  std::atomic<std::uint64_t> next{0};
  std::atomic<std::uint64_t> best{kNone};
  auto worker = [&] {
    Scratch scratch = make_scratch();
    while (true) {
      std::uint64_t start = next.fetch_add(chunk);
      if (start >= total || start > best.load()) return;
      std::uint64_t stop = std::min(total, start + chunk);
      for (std::uint64_t i = start; i < stop; ++i) {
        if (i > best.load(std::memory_order_relaxed)) break;
        if (pred(i, scratch)) {
          std::uint64_t cur = best.load();
          while (i < cur && !best.compare_exchange_weak(cur, i)) {
          }
          break;
        }
      }
    }
  };
  std::vector<std::thread> threads;
  for (int t = 0; t < jobs; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (best.load() == kNone) return std::nullopt;
  return best.load();
}

}  // namespace nbhd
