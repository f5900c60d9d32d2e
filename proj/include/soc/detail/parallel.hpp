#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace soc::detail {

inline unsigned worker_count(std::size_t tasks) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(hw, std::max<std::size_t>(tasks, 1)));
}

// Runs fn(block_index, begin, end) over [0, count) split into fixed-size blocks.
// Block boundaries do not depend on the thread count, so callers that reduce
// per-block results in block order get bit-identical output on any machine.
template <typename Fn>
void for_each_block(std::size_t count, std::size_t block_size, Fn&& fn) {
  const std::size_t blocks = (count + block_size - 1) / block_size;
  const unsigned workers = worker_count(blocks);
  auto run_block = [&](std::size_t b) {
    const std::size_t begin = b * block_size;
    fn(b, begin, std::min(count, begin + block_size));
  };
  if (workers <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t b = next++; b < blocks; b = next++) {
        try {
          run_block(b);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace soc::detail
