#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace steinlab {

// Static-chunk parallel loop. Each index is processed exactly once and all
// results must be written to caller-owned slots indexed by i, so the thread
// count never changes any output bit; it only changes wall time.
template <typename F>
void parallel_for(std::size_t n, unsigned threads, F&& body) {
    if (n == 0) return;
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    unsigned t = threads == 0 ? hw : threads;
    if (t > n) t = static_cast<unsigned>(n);
    if (t <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(t);
    const std::size_t chunk = (n + t - 1) / t;
    for (unsigned w = 0; w < t; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = lo + chunk < n ? lo + chunk : n;
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace steinlab
