#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace nls {

// Worker cap from NLS_LAB_THREADS (default: hardware concurrency, at least 1).
int worker_count();

// Runs body(i) for i in [0, n) on up to worker_count() threads with static chunking.
// The first exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

// Pairwise sum in a fixed order, independent of thread count.
double pairwise_sum(const double* x, std::size_t n);
inline double pairwise_sum(const std::vector<double>& x) { return pairwise_sum(x.data(), x.size()); }

}  // namespace nls
