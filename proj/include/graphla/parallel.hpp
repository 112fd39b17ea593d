#pragma once

#include <Eigen/Core>
#include <functional>

namespace graphla {

// Global worker budget for the coarse parallel loops (graph assembly,
// trace batches, benchmark cells). 0 or 1 means serial. All loops write
// to disjoint, preallocated slots, so the numerics are identical for any
// thread count.
void set_max_threads(int n);
int max_threads();

// Runs fn(begin, end) over a partition of [0, n). Deterministic chunking.
void parallel_for(Eigen::Index n,
                  const std::function<void(Eigen::Index, Eigen::Index)>& fn);

}  // namespace graphla
