#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fpcav {

template <class Body>
void for_each_block(std::size_t block_count, unsigned threads, Body&& body) {
  if (threads == 0) threads = default_thread_count();
  const auto workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), block_count));
  if (workers <= 1) {
    for (std::size_t b = 0; b < block_count; ++b) body(b);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t b = next.fetch_add(1);
          if (b >= block_count) return;
          try {
            body(b);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next.store(block_count);
            return;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace fpcav
