#pragma once

#include <cstddef>
#include <functional>

namespace refinery {

// Worker count: hardware concurrency, capped by REFINERY_THREADS when set.
unsigned worker_count();

// Runs body(i) for i in [0, n) over contiguous blocks; body must only touch
// slot i of any shared output.
void parallel_for(size_t n, const std::function<void(size_t)>& body);

}  // namespace refinery
