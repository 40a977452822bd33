#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace wpfr {

// Deterministic parallel map: results land in index order regardless of
// scheduling, so CSV output is byte-identical across runs.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, unsigned workers, const Fn& fn) {
    std::vector<T> out(n);
    if (n == 0) return out;
    if (workers <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    auto run = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            out[i] = fn(i);
        }
    };
    std::vector<std::thread> pool;
    const unsigned k = std::min<unsigned>(workers, static_cast<unsigned>(n));
    pool.reserve(k);
    for (unsigned t = 0; t < k; ++t) pool.emplace_back(run);
    for (auto& th : pool) th.join();
    return out;
}

}  // namespace wpfr
