#pragma once

#include <functional>
#include <thread>
#include <vector>

#include "flab/common.hpp"

namespace flab {

/// Runs fn(i) for i in [0,n) on `threads` workers with static chunking.
/// Work items must not share mutable state; results should be written to
/// index i of a preallocated output so the combined result is independent
/// of scheduling.
template <class Fn>
void parallel_for(int64_t n, int threads, Fn&& fn) {
    if (n <= 0) return;
    if (threads <= 1 || n == 1) {
        for (int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    int nw = int(std::min<int64_t>(threads, n));
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (int w = 0; w < nw; ++w) {
        int64_t lo = n * w / nw;
        int64_t hi = n * (w + 1) / nw;
        pool.emplace_back([lo, hi, &fn] {
            for (int64_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace flab
