#pragma once

#include <algorithm>
#include <atomic>
#include <thread>

namespace fsoqkd::oracle {

template <class Event>
std::uint64_t count_events(const PointingParams& p, std::uint64_t seed, std::uint64_t n,
                           Event event, unsigned threads) {
  p.validate();
  const std::uint64_t chunks = (n + kChunkSize - 1) / kChunkSize;
  const unsigned workers = detail::resolve_threads(threads, chunks);
  std::atomic<std::uint64_t> next{0};
  std::atomic<std::uint64_t> total{0};
  auto work = [&] {
    std::vector<Angles> buf;
    std::uint64_t hits = 0;
    for (std::uint64_t c = next++; c < chunks; c = next++) {
      const std::uint64_t begin = c * kChunkSize;
      buf.resize(static_cast<std::size_t>(std::min(kChunkSize, n - begin)));
      sample_chunk(p, seed, c, buf);
      for (const Angles& a : buf) hits += event(a.v, a.h) ? 1 : 0;
    }
    total += hits;
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
  }
  return total.load();
}

}  // namespace fsoqkd::oracle
