#pragma once

#include <cstdint>
#include <functional>

namespace cellscape {

// Process-wide worker count for the few parallel loops (generation,
// correlation tiles, tessellation cells). Every parallel site partitions
// work into chunks whose results are independent and deterministic, so
// outputs are identical for any thread count.
void set_thread_count(int n);
int thread_count();

// Runs fn(begin, end) over disjoint chunks of [0, n). With one thread this
// is a plain call; otherwise chunks run on a small temporary pool.
void parallel_chunks(int64_t n, const std::function<void(int64_t, int64_t)>& fn);

}  // namespace cellscape
