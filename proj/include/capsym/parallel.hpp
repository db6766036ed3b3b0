#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace capsym {

/// Worker count: CAPSYM_THREADS if set (>= 1), else hardware concurrency.
unsigned thread_count();

/// Runs body(chunk_index, begin, end) over [0, n) split into fixed chunks of
/// `chunk` items. The chunking does not depend on the thread count, so any
/// per-chunk partial result reduced in chunk order is deterministic.
void for_chunks(std::size_t n, std::size_t chunk,
                const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

/// Deterministic sum of body(begin, end) over fixed chunks, reduced in order.
double chunked_sum(std::size_t n, std::size_t chunk,
                   const std::function<double(std::size_t, std::size_t)>& body);

}  // namespace capsym
