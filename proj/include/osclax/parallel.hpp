#pragma once

#include <cstddef>
#include <functional>

namespace osclax {

// Process-wide worker count (0 = hardware concurrency). Results never depend
// on it: work items write to their own slots.
void set_thread_count(int n);
int thread_count();

// Runs body(i) for i in [0, n). Exceptions from workers are rethrown on the
// caller (the one from the lowest index wins).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace osclax
