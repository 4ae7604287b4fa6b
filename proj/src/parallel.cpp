#include "ssf/parallel.hpp"

#include <algorithm>

#include <omp.h>

namespace ssf {

std::vector<std::size_t> count_support_serial(const std::vector<ItemSet>& transactions,
                                              const std::vector<ItemSet>& candidates) {
    std::vector<std::size_t> counts(candidates.size(), 0);
    for (const auto& tx : transactions) {
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            if (std::includes(tx.begin(), tx.end(), candidates[c].begin(), candidates[c].end())) {
                ++counts[c];
            }
        }
    }
    return counts;
}

// Transactions are split across threads, each counting into its own
// vector; integer sums merge to the same result in any order.
std::vector<std::size_t> count_support_parallel(const std::vector<ItemSet>& transactions,
                                                const std::vector<ItemSet>& candidates,
                                                int threads) {
    std::vector<std::size_t> counts(candidates.size(), 0);
    const auto n = static_cast<std::ptrdiff_t>(transactions.size());
    const int team = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel num_threads(team)
    {
        std::vector<std::size_t> local(candidates.size(), 0);
#pragma omp for schedule(static) nowait
        for (std::ptrdiff_t t = 0; t < n; ++t) {
            const auto& tx = transactions[static_cast<std::size_t>(t)];
            for (std::size_t c = 0; c < candidates.size(); ++c) {
                if (std::includes(tx.begin(), tx.end(), candidates[c].begin(), candidates[c].end())) ++local[c];
            }
        }
#pragma omp critical(ssf_support_merge)
        for (std::size_t c = 0; c < candidates.size(); ++c) counts[c] += local[c];
    }
    return counts;
}

} // namespace ssf
