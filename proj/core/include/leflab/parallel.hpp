// Deterministic-result parallel loop: work is chunked by index range, outputs
// land in caller-owned slots, so the merged result is independent of thread
// scheduling. Job count from the argument, else LEFSCHETZ_LAB_JOBS, else the
// hardware concurrency.
#pragma once

#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace leflab {

inline int default_jobs() {
    if (const char* env = std::getenv("LEFSCHETZ_LAB_JOBS")) {
        int j = std::atoi(env);
        if (j > 0) return j;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

inline void parallel_for(int n, int jobs, const std::function<void(int)>& body) {
    if (jobs <= 0) jobs = default_jobs();
    if (jobs == 1 || n <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    int threads = std::min(jobs, n);
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([=, &body] {
            for (int i = t; i < n; i += threads) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace leflab
