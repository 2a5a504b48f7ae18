#pragma once

#include <cstddef>
#include <functional>

namespace entrywise {

// ENTRYWISE_THREADS when set to a positive integer, else the hardware
// concurrency (at least 1).
std::size_t default_threads();

// Runs fn(i) for every i in [0, count) on up to `threads` workers (0 picks
// default_threads()). Items are claimed from a shared counter. After a call
// throws, no new items start; once the workers stop, the exception from the
// lowest failing index that ran is rethrown.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn);

}  // namespace entrywise
