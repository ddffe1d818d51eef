#pragma once

#include <cstddef>
#include <functional>

namespace monopole {

// Worker cap: MONOPOLE_THREADS if set and positive, else hardware concurrency.
int worker_limit();

// Runs body(i) for i in [0, count). Work is split into contiguous blocks over
// at most worker_limit() threads; small jobs run inline. Each index is
// touched by exactly one thread, so results do not depend on the split.
void parallel_for(std::size_t count, std::size_t grain, const std::function<void(std::size_t)>& body);

}  // namespace monopole
