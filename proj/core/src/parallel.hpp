#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hermitangent::detail {

// Splits [begin, end) into one contiguous chunk per worker and runs
// fn(chunk_index, chunk_begin, chunk_end). The first exception thrown by a
// worker is rethrown on the calling thread.
template <class Fn>
void parallel_chunks(std::size_t threads, std::uint64_t begin, std::uint64_t end, Fn&& fn) {
  const std::uint64_t total = end > begin ? end - begin : 0;
  threads = std::max<std::size_t>(1, std::min<std::uint64_t>(threads, std::max<std::uint64_t>(total, 1)));
  if (threads == 1) {
    fn(std::size_t{0}, begin, end);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w) {
    const std::uint64_t lo = begin + total * w / threads;
    const std::uint64_t hi = begin + total * (w + 1) / threads;
    workers.emplace_back([&, w, lo, hi] {
      try {
        fn(w, lo, hi);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : workers) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace hermitangent::detail
