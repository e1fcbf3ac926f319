#pragma once

#include <atomic>
#include <complex>
#include <cstddef>
#include <thread>
#include <vector>

#include "kahan.hpp"

namespace cesaro {

inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0)
        return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

// Deterministic parallel reduction: one task per index, partials merged in
// index order.  The result is bit-identical for every worker count because
// each partial is computed independently and the merge order is fixed.
template <typename T, typename F>
T indexed_sum(std::size_t n, unsigned threads, F&& term) {
    threads = resolve_threads(threads);
    std::vector<T> partial(n);
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i)
            partial[i] = term(i);
    } else {
        if (threads > n)
            threads = static_cast<unsigned>(n);
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= n)
                        return;
                    partial[i] = term(i);
                }
            });
        }
        for (auto& th : pool)
            th.join();
    }
    if constexpr (std::is_same_v<T, std::complex<double>>) {
        kahan_csum acc;
        for (const auto& p : partial)
            acc.add(p);
        return acc.value();
    } else {
        kahan_sum acc;
        for (const auto& p : partial)
            acc.add(p);
        return acc.value();
    }
}

} // namespace cesaro
