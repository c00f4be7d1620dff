#ifndef COOPFIELD_PARALLEL_HPP
#define COOPFIELD_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace coopfield {

// Worker cap: COOPFIELD_THREADS environment variable, defaulting to the
// machine parallelism. Always at least 1.
int worker_count();

// Runs fn(i) for i in [0, n) on up to worker_count() threads. Work items must
// not share mutable state; the first exception thrown is rethrown here.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace coopfield

#endif
