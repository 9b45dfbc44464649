#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "roughsum/summation.hpp"

namespace roughsum {

struct Parallelism {
  unsigned threads = 1;
};

// Chunk length for reductions. Fixed so that chunk boundaries, and hence
// every rounding step, do not depend on the worker count.
inline constexpr std::int64_t kReductionChunk = 4096;

// Runs task(i) for i in [0, count) on up to `threads` workers. Each task
// index runs exactly once; the first exception thrown is rethrown.
template <class Task>
void parallel_for(std::size_t count, Parallelism par, Task&& task) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, par.threads), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// Sum of term(i) over i in [first, last], compensated within each chunk and
// combined in chunk order. Bit-identical for any thread count.
template <class T, class Term>
T deterministic_sum(std::int64_t first, std::int64_t last, Parallelism par, Term&& term) {
  if (last < first) return T{};
  const std::int64_t count = last - first + 1;
  const auto chunks = static_cast<std::size_t>((count + kReductionChunk - 1) / kReductionChunk);
  std::vector<T> partial(chunks);
  parallel_for(chunks, par, [&](std::size_t c) {
    const std::int64_t lo = first + static_cast<std::int64_t>(c) * kReductionChunk;
    const std::int64_t hi = std::min(last, lo + kReductionChunk - 1);
    CompensatedFor_t<T> acc;
    for (std::int64_t i = lo; i <= hi; ++i) acc.add(term(i));
    partial[c] = acc.value();
  });
  CompensatedFor_t<T> total;
  for (const T& p : partial) total.add(p);
  return total.value();
}

}  // namespace roughsum
