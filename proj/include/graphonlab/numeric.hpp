#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <thread>
#include <vector>

namespace graphonlab {

// Pairwise (tree) reduction. Canonical order: the result depends only on the
// order of `x`, never on chunking or thread count.
inline double pairwise_sum(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = x[0];
        for (std::size_t i = 1; i < n; ++i) s += x[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(x.subspan(0, half)) + pairwise_sum(x.subspan(half));
}

inline double pairwise_mean(std::span<const double> x) {
    if (x.empty()) return 0.0;
    return pairwise_sum(x) / static_cast<double>(x.size());
}

// Sample standard error of the mean over independent replications.
inline double stderr_of_mean(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 2) return 0.0;
    const double mean = pairwise_mean(x);
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - mean;
        sq[i] = d * d;
    }
    const double var = pairwise_sum(sq) / static_cast<double>(n - 1);
    return std::sqrt(var / static_cast<double>(n));
}

inline std::vector<std::size_t> argsort(std::span<const double> keys) {
    std::vector<std::size_t> idx(keys.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
    return idx;
}

// Static block partition: deterministic work split, results land in
// caller-owned slots so aggregation order never depends on thread count.
inline void parallel_for(std::size_t count, int threads,
                         const std::function<void(std::size_t)>& body) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    const int workers = static_cast<int>(std::min<std::size_t>(threads, count));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (std::size_t i = static_cast<std::size_t>(w); i < count;
                 i += static_cast<std::size_t>(workers)) {
                body(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

inline int default_threads() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace graphonlab
