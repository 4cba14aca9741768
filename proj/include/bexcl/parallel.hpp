#pragma once

#include <cstdint>
#include <cstdlib>
#include <thread>
#include <vector>

namespace bexcl {

inline int default_threads() {
    if (const char* env = std::getenv("BEXCL_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Static block partition of [begin, end); fn(i) must be independent across i.
template <class F>
void parallel_for(std::int64_t begin, std::int64_t end, F&& fn, int threads = default_threads()) {
    const std::int64_t count = end - begin;
    if (count <= 0) return;
    if (threads <= 1 || count == 1) {
        for (std::int64_t i = begin; i < end; ++i) fn(i);
        return;
    }
    const std::int64_t workers = std::min<std::int64_t>(threads, count);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (std::int64_t w = 0; w < workers; ++w) {
        const std::int64_t lo = begin + count * w / workers;
        const std::int64_t hi = begin + count * (w + 1) / workers;
        pool.emplace_back([lo, hi, &fn] {
            for (std::int64_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace bexcl
