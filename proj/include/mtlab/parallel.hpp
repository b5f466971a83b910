#pragma once

#include <cstddef>
#include <functional>

namespace mtlab {

// Size of the worker pool used by parallel_for. 0 = hardware concurrency.
void set_worker_count(int n);
int worker_count();

// Runs fn(i) for i in [0, n). Work is distributed cyclically (thread t takes
// i = t, t + T, ...) so unevenly sized items balance out, and every write the
// body makes must go to a slot owned by its index; reductions happen after the
// join, in index order, which keeps results independent of the schedule.
// Nested calls from inside a worker run inline on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace mtlab
