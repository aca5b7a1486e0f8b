#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "ambiq/rng.hpp"

namespace ambiq::detail {

/// Draws per independent RNG stream in chunked sampling.
inline constexpr std::size_t kSampleChunk = 4096;

/// Set on pool threads; nested parallel_for calls then run inline.
inline thread_local bool in_worker = false;

/// Runs task(i) for i in [0, tasks) on a small worker pool. Each index is
/// handled exactly once; the first exception is rethrown on the caller.
template <class Task>
void parallel_for(std::size_t tasks, Task&& task) {
  if (tasks == 0) return;
  const std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  const std::size_t workers = std::min(hw, tasks);
  if (workers == 1 || in_worker) {
    for (std::size_t i = 0; i < tasks; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    const bool outer = in_worker;
    in_worker = true;
    struct Restore {
      bool value;
      ~Restore() { in_worker = value; }
    } restore{outer};
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks) return;
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(tasks);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

/// Splits [0, count) into kSampleChunk-sized chunks; chunk c runs with an Rng
/// seeded from stream c of `seed`, so output is schedule independent.
template <class ChunkFn>
void run_chunked(std::size_t count, std::uint64_t seed, ChunkFn&& fn) {
  const std::size_t chunks = (count + kSampleChunk - 1) / kSampleChunk;
  parallel_for(chunks, [&](std::size_t c) {
    Rng rng(derive_stream_seed(seed, c));
    const std::size_t begin = c * kSampleChunk;
    const std::size_t end = std::min(count, begin + kSampleChunk);
    fn(rng, begin, end);
  });
}

}  // namespace ambiq::detail
