#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace asb {

/// Global worker count for fork-join loops (0 = hardware concurrency).
void set_thread_count(int threads);
int thread_count();

/// Splits [0, total) into fixed-size chunks and runs fn(chunk_index, begin, end)
/// across the worker pool. Chunk boundaries depend only on chunk_size, never on
/// the thread count, so per-chunk results can be reduced in deterministic order.
void parallel_chunks(std::size_t total, std::size_t chunk_size,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

inline std::size_t num_chunks(std::size_t total, std::size_t chunk_size) {
    return (total + chunk_size - 1) / chunk_size;
}

} // namespace asb
