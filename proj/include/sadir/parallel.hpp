#pragma once

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace sadir {

/// Worker count: SADIR_THREADS env var if set, else hardware concurrency.
inline int thread_count() {
    if (const char* env = std::getenv("SADIR_THREADS")) {
        int t = std::atoi(env);
        if (t >= 1) return t;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

/// Split [0, count) into one contiguous range per worker and run
/// f(begin, end) on each. Each worker owns its range exclusively, and range
/// boundaries depend only on `count` and the worker count, so any
/// per-element work that writes only inside its own range is safe.
template <class F>
void parallel_ranges(int count, F&& f) {
    int t = std::min(thread_count(), std::max(count, 1));
    if (t <= 1 || count <= 1) {
        if (count > 0) f(0, count);
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(static_cast<size_t>(t));
    int chunk = (count + t - 1) / t;
    for (int w = 0; w < t; ++w) {
        int lo = w * chunk;
        int hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        workers.emplace_back([&f, lo, hi] { f(lo, hi); });
    }
    for (auto& th : workers) th.join();
}

/// Run f(i) for i in [0, count), partitioned contiguously across workers.
template <class F>
void parallel_for(int count, F&& f) {
    parallel_ranges(count, [&f](int lo, int hi) {
        for (int i = lo; i < hi; ++i) f(i);
    });
}

}  // namespace sadir
