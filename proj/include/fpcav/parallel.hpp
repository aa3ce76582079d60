#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace fpcav {

using Rng = std::mt19937_64;

/// Independent generator for one stream of a seeded run.
[[nodiscard]] inline Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

/// Thread count from FPCAV_THREADS, else hardware concurrency.
[[nodiscard]] unsigned default_thread_count();

/// Calls body(block_index) for every block in [0, block_count) using up to
/// `threads` workers. Blocks are claimed dynamically; callers write results
/// into per-block slots and reduce them in block order.
template <class Body>
void for_each_block(std::size_t block_count, unsigned threads, Body&& body);

}  // namespace fpcav

#include "fpcav/parallel_impl.hpp"
