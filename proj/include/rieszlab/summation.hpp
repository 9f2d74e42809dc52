#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace rieszlab {

// =============================================================================
// Deterministic reductions
// =============================================================================
//
// Every accumulation in the library runs as a fixed-shape pairwise reduction
// over a canonically ordered term sequence. The tree shape depends only on the
// term count, so results are identical across runs and across worker counts;
// parallelism is only ever applied across independent reductions.

namespace detail {
inline constexpr std::size_t kPairwiseBlock = 16;

template <class T, class TermFn>
T pairwise_impl(std::size_t begin, std::size_t end, const TermFn& term) {
    const std::size_t n = end - begin;
    if (n <= kPairwiseBlock) {
        T acc = term(begin);
        for (std::size_t i = begin + 1; i < end; ++i) acc += term(i);
        return acc;
    }
    const std::size_t mid = begin + n / 2;
    T left = pairwise_impl<T>(begin, mid, term);
    T right = pairwise_impl<T>(mid, end, term);
    left += right;
    return left;
}
}  // namespace detail

/// Pairwise (tournament) reduction of term(0..n-1). `zero` is returned for an
/// empty range and is otherwise untouched, so it never perturbs the sum.
template <class T, class TermFn>
T pairwise_sum(std::size_t n, const TermFn& term, T zero) {
    if (n == 0) return zero;
    return detail::pairwise_impl<T>(0, n, term);
}

/// Convenience overload for plain double sums.
template <class TermFn>
double pairwise_sum(std::size_t n, const TermFn& term) {
    return pairwise_sum<double>(n, term, 0.0);
}

// =============================================================================
// Worker pool
// =============================================================================

namespace detail {
inline std::atomic<int>& thread_count_slot() {
    static std::atomic<int> count{1};
    return count;
}
}  // namespace detail

/// Set the process-wide worker cap. 0 picks the hardware concurrency.
inline void set_thread_count(int n) {
    if (n <= 0) {
        unsigned hw = std::thread::hardware_concurrency();
        n = hw == 0 ? 1 : static_cast<int>(hw);
    }
    if (n > 64) n = 64;
    detail::thread_count_slot().store(n, std::memory_order_relaxed);
}

inline int thread_count() { return detail::thread_count_slot().load(std::memory_order_relaxed); }

/// Run fn(i) for i in [0, n) across the worker pool with a static block
/// assignment. Each task must write only to its own output slot; the
/// scheduling never influences any numeric result.
template <class Fn>
void parallel_for(std::size_t n, const Fn& fn) {
    const int workers = thread_count();
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t t = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
    std::vector<std::thread> pool;
    pool.reserve(t);
    for (std::size_t w = 0; w < t; ++w) {
        const std::size_t lo = n * w / t;
        const std::size_t hi = n * (w + 1) / t;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace rieszlab
