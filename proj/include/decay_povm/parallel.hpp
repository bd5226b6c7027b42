#pragma once

#include <cstddef>
#include <functional>

namespace decay_povm {

// Worker count: DECAY_POVM_THREADS if set and positive, else the hardware concurrency.
unsigned worker_count();

// Splits [0, n) into contiguous chunks, one per worker; fn(begin, end) must only touch its own range.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace decay_povm
