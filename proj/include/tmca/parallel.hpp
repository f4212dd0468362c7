#pragma once

#include <functional>

namespace tmca {

/// Caps the number of worker threads for internally parallel operations.
/// 0 restores the default (hardware concurrency). Thread count never
/// changes numerical results: work is split into contiguous index ranges
/// and each index is processed with a fixed internal order.
void set_max_threads(int n);
int max_threads();

/// Runs fn(i) for i in [begin, end), possibly across worker threads.
/// fn must write only to state owned by index i.
void parallel_for(int begin, int end, const std::function<void(int)>& fn);

}  // namespace tmca
