#pragma once

#include <cstddef>
#include <functional>

namespace mdlab {

// Worker count used by parallel_for; 1 (the default) runs inline.
void set_thread_count(std::size_t n);
std::size_t thread_count();

// Calls fn(i) for i in [0, n). Iterations must write disjoint outputs. The
// first exception thrown by any worker is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace mdlab
