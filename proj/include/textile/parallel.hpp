#pragma once

#include <cstddef>
#include <functional>

namespace textile {

// Runs fn(i) for every i in [0, n), statically chunked across threads.
// Callers must write results to index-distinct slots; with that discipline
// parallel and serial execution are indistinguishable. threads == 0 picks
// the hardware count. The first exception thrown by any chunk is rethrown.
void parallel_for(size_t n, const std::function<void(size_t)>& fn, unsigned threads = 0);

}  // namespace textile
