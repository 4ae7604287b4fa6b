#pragma once

// Data-parallel kernels. Each OpenMP kernel has a serial twin that is kept
// as the reference implementation for tests and benchmarks; both must
// produce identical output.

#include <cstddef>
#include <vector>

namespace ssf {

using ItemSet = std::vector<int>; // sorted item ids

/// Number of transactions containing each candidate.
std::vector<std::size_t> count_support_serial(const std::vector<ItemSet>& transactions,
                                              const std::vector<ItemSet>& candidates);
/// `threads <= 0` uses the OpenMP default.
std::vector<std::size_t> count_support_parallel(const std::vector<ItemSet>& transactions,
                                                const std::vector<ItemSet>& candidates,
                                                int threads = 0);

/// Batch detection kernels (detect_batch_serial / detect_batch_parallel) are
/// declared in detector.hpp next to the single-query pipeline.

} // namespace ssf
