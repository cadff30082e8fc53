#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <thread>
#include <vector>

namespace gcss {

using Complex = std::complex<double>;

namespace constants {
// speed of light in nm/fs
inline constexpr double c_nm_per_fs = 299.792458;
inline constexpr double pi = 3.14159265358979323846;
}  // namespace constants

// Pairwise (cascade) summation. Reduction order depends only on the input
// order, never on thread count, so results are reproducible.
inline double pairwise_sum(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n <= 8) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

// Trapezoidal integral on a uniform grid, reduced with pairwise_sum.
inline double trapezoid_uniform(std::span<const double> values, double step) {
    if (values.size() < 2) return 0.0;
    double s = pairwise_sum(values);
    s -= 0.5 * (values.front() + values.back());
    return s * step;
}

// Effective thread count: 0 -> hardware_concurrency, else the given value.
inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

// Runs fn(i) for i in [0, n). Work is split into contiguous index blocks;
// each index is processed exactly once, so any per-index output slot is
// written deterministically regardless of thread count.
inline void parallel_for(std::size_t n, int n_threads,
                         const std::function<void(std::size_t)>& fn) {
    n_threads = resolve_threads(n_threads);
    if (n_threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t blocks = static_cast<std::size_t>(n_threads);
    std::vector<std::thread> pool;
    pool.reserve(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
        const std::size_t lo = n * b / blocks;
        const std::size_t hi = n * (b + 1) / blocks;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace gcss
