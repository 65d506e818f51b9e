#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "htea/core/rng.hpp"

namespace htea::exp {

// Seed of run run_index at sweep point point_index.
inline std::uint64_t run_seed(std::uint64_t master, std::uint64_t point_index, std::uint64_t run_index) {
  return mix(master, point_index, run_index);
}

// Seed of one min-mu probe run: (c index, mu, re-sample round, run).
inline std::uint64_t minmu_seed(std::uint64_t master, std::uint64_t c_index, std::uint64_t mu,
                                std::uint64_t resample, std::uint64_t run) {
  return mix(mix(master, c_index, mu), resample, run);
}

// Evaluates fn(0..count-1) on up to `threads` workers. Results land at their
// index, so the outcome does not depend on scheduling. The first exception
// thrown by any task is rethrown after all workers stop.
template <class R, class F>
std::vector<R> parallel_map(std::size_t count, unsigned threads, F&& fn) {
  std::vector<R> out(count);
  if (threads <= 1 || count <= 1) {
    for (std::size_t k = 0; k < count; ++k) out[k] = fn(k);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (;;) {
      if (stop.load()) return;
      const std::size_t k = next.fetch_add(1);
      if (k >= count) return;
      try {
        out[k] = fn(k);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        stop.store(true);
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned w = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  for (unsigned t = 0; t < w; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

// Shortest round-trip text of a double; "nan" and "inf" spelled out.
std::string fmt(double v);

}  // namespace htea::exp
