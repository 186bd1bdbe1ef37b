#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace vswe {

/// Chunked parallel loop over [0, n). Each index is visited exactly once and
/// writes must target disjoint slots, so results are identical for any worker
/// count. Reductions stay out of here: callers reduce serially in fixed order.
template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
    if (workers <= 1 || n < 256) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t nw = static_cast<std::size_t>(workers);
    const std::size_t chunk = (n + nw - 1) / nw;
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (std::size_t w = 0; w < nw; ++w) {
        const std::size_t lo = w * chunk;
        if (lo >= n) break;
        const std::size_t hi = std::min(n, lo + chunk);
        pool.emplace_back([lo, hi, &fn]() {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace vswe
