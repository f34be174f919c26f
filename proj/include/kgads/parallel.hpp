#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <span>
#include <thread>
#include <vector>

namespace kgads {

namespace detail {
inline std::atomic<int>& thread_setting() {
    static std::atomic<int> n{1};
    return n;
}
}  // namespace detail

inline void set_thread_count(int n) { detail::thread_setting() = std::max(1, n); }
inline int thread_count() { return detail::thread_setting(); }

// Runs fn(begin, end) over fixed-size chunks of [0, n). Chunk boundaries do not
// depend on the worker count, so results are identical for any thread setting.
template <class Fn>
void parallel_chunks(std::size_t n, std::size_t chunk, Fn&& fn) {
    if (n == 0) return;
    chunk = std::max<std::size_t>(1, chunk);
    const std::size_t chunks = (n + chunk - 1) / chunk;
    const int workers = static_cast<int>(std::min<std::size_t>(chunks, thread_count()));
    if (workers <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) fn(c * chunk, std::min(n, (c + 1) * chunk));
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t c = next++; c < chunks; c = next++) fn(c * chunk, std::min(n, (c + 1) * chunk));
        });
    }
}

// Pairwise (cascade) summation with a fixed tree shape.
inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t h = v.size() / 2;
    return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(std::span<const double>(v)); }

}  // namespace kgads
