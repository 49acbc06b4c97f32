#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace qcsched {

// Runs fn(i) for i in [begin, end) on up to `threads` workers. Work items
// must be independent; callers that aggregate do so by index so the result
// does not depend on which worker ran which item.
template <typename Fn>
void parallel_for(std::int64_t begin, std::int64_t end, int threads, Fn&& fn) {
    const std::int64_t count = end - begin;
    if (count <= 0) return;
    int workers = threads < 1 ? 1 : threads;
    if (static_cast<std::int64_t>(workers) > count) workers = static_cast<int>(count);
    if (workers == 1) {
        for (std::int64_t i = begin; i < end; ++i) fn(i);
        return;
    }
    std::atomic<std::int64_t> cursor{begin};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::int64_t i = cursor.fetch_add(1);
                if (i >= end) break;
                fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace qcsched
