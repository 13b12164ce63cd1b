#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace rmg {

// Runs fn(chunk_index) for every index in [0, chunks) on up to `workers`
// threads. Callers write per-chunk results into preallocated slots and reduce
// in chunk order afterwards, so the outcome is independent of scheduling and
// of the worker count.
inline void parallel_chunks(std::size_t chunks, int workers,
                            const std::function<void(std::size_t)>& fn) {
    if (workers <= 1 || chunks <= 1) {
        for (std::size_t i = 0; i < chunks; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto body = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= chunks) return;
            fn(i);
        }
    };
    std::size_t nthreads = std::min<std::size_t>(workers, chunks);
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t + 1 < nthreads; ++t) pool.emplace_back(body);
    body();
    for (auto& th : pool) th.join();
}

}  // namespace rmg
