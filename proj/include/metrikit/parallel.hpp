#pragma once

#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace metrikit {

/// Worker count for data-parallel loops. Defaults to the hardware
/// concurrency; the METRIKIT_THREADS environment variable caps it.
/// Always at least 1.
inline std::size_t thread_count() {
    static const std::size_t cached = [] {
        std::size_t n = std::thread::hardware_concurrency();
        if (n == 0) n = 1;
        if (const char* env = std::getenv("METRIKIT_THREADS")) {
            char* end = nullptr;
            const unsigned long cap = std::strtoul(env, &end, 10);
            if (end != env && cap >= 1 && cap < n) n = static_cast<std::size_t>(cap);
        }
        return n;
    }();
    return cached;
}

/// Runs work(begin, end) over disjoint index ranges covering [0, n).
/// Results must be merged by the caller in range order; the partition
/// depends only on n and the worker count, never on scheduling.
template <typename Work>
void parallel_index(std::size_t n, Work work) {
    const std::size_t workers = std::min(thread_count(), n == 0 ? std::size_t{1} : n);
    if (workers <= 1 || n < 2) {
        work(std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&work, begin, end] { work(begin, end); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace metrikit
