#ifndef AOIF_PARALLEL_HPP
#define AOIF_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace aoif {

// Worker cap: AOIF_THREADS when set (clamped to at least 1), otherwise the
// hardware concurrency.
std::size_t max_threads();

// Runs fn(i) for i in [0, count). Work items must be independent; callers
// make reductions deterministic by writing into index-addressed slots.
// Exceptions from workers are rethrown on the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace aoif

#endif
