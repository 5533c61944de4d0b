#pragma once

#include <cstddef>
#include <vector>

namespace mixedvol {

/// Number of worker threads the parallel kernels may use. Honours the
/// MIXEDVOL_THREADS environment variable (read once) as an upper cap on
/// the OpenMP default; always at least 1.
int max_threads();

namespace detail {

// Fixed block size for deterministic reductions. Results must not depend
// on the thread count, so blocks are summed in index order and the block
// partials are combined by pairwise folding, both independent of how the
// blocks were scheduled.
inline constexpr std::size_t kReduceBlock = 2048;

double pairwise_fold(std::vector<double>& partial);

}  // namespace detail

/// Deterministic parallel sum of term(i) for i in [0, n).
/// The summation order is fixed (blocked + pairwise fold), so the result
/// is bit-identical for any thread count, including the serial reference.
template <class F>
double reduce_sum(std::size_t n, F&& term) {
    if (n == 0) return 0.0;
    const std::size_t nblocks = (n + detail::kReduceBlock - 1) / detail::kReduceBlock;
    std::vector<double> partial(nblocks, 0.0);
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (long long b = 0; b < static_cast<long long>(nblocks); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * detail::kReduceBlock;
        const std::size_t hi = lo + detail::kReduceBlock < n ? lo + detail::kReduceBlock : n;
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += term(i);
        partial[static_cast<std::size_t>(b)] = s;
    }
    return detail::pairwise_fold(partial);
}

/// Serial reference for reduce_sum: plain left-to-right accumulation.
/// Kept as an independent implementation for tests and benchmarks.
template <class F>
double reduce_sum_serial(std::size_t n, F&& term) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += term(i);
    return s;
}

/// Deterministic parallel accumulation of fixed-size vectors: body(i, acc)
/// adds index i's contribution into acc (length dim). Blocked like
/// reduce_sum, so the result is independent of the thread count.
template <class F>
std::vector<double> reduce_sum_vec(std::size_t n, std::size_t dim, F&& body) {
    std::vector<double> total(dim, 0.0);
    if (n == 0) return total;
    const std::size_t nblocks = (n + detail::kReduceBlock - 1) / detail::kReduceBlock;
    std::vector<std::vector<double>> partial(nblocks);
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (long long b = 0; b < static_cast<long long>(nblocks); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * detail::kReduceBlock;
        const std::size_t hi = lo + detail::kReduceBlock < n ? lo + detail::kReduceBlock : n;
        std::vector<double> acc(dim, 0.0);
        for (std::size_t i = lo; i < hi; ++i) body(i, acc.data());
        partial[static_cast<std::size_t>(b)] = std::move(acc);
    }
    // Pairwise fold per component, block index order.
    std::vector<double> col(nblocks);
    for (std::size_t d = 0; d < dim; ++d) {
        for (std::size_t b = 0; b < nblocks; ++b) col[b] = partial[b][d];
        std::vector<double> tmp = col;
        total[d] = detail::pairwise_fold(tmp);
    }
    return total;
}

/// Deterministic parallel max of term(i) (max is order-independent).
template <class F>
double reduce_max(std::size_t n, F&& term, double init) {
    double best = init;
#pragma omp parallel for schedule(static) num_threads(max_threads()) reduction(max : best)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        const double v = term(static_cast<std::size_t>(i));
        if (v > best) best = v;
    }
    return best;
}

/// Deterministic parallel count of indices satisfying pred.
template <class P>
std::size_t reduce_count(std::size_t n, P&& pred) {
    long long c = 0;
#pragma omp parallel for schedule(static) num_threads(max_threads()) reduction(+ : c)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
        if (pred(static_cast<std::size_t>(i))) ++c;
    return static_cast<std::size_t>(c);
}

/// Parallel for over [0, n); body must be safe to run concurrently and
/// write only to its own index.
template <class F>
void parallel_for(std::size_t n, F&& body) {
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (long long i = 0; i < static_cast<long long>(n); ++i) body(static_cast<std::size_t>(i));
}

}  // namespace mixedvol
