#ifndef MOPROX_KERNELS_HPP
#define MOPROX_KERNELS_HPP

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace moprox::kernels {

/// Execution policy for the data-parallel kernels. Every kernel has a serial
/// reference twin; results are identical by construction (pure per-index
/// work, deterministic tie-breaking reductions).
struct ExecPolicy {
    bool parallel = true;
    int threads = 0;  // 0 = runtime default

    static ExecPolicy serial() { return {false, 0}; }
};

template <class F>
void for_each_index(std::size_t n, const ExecPolicy& pol, F&& fn) {
    if (pol.parallel) {
#if defined(_OPENMP)
        if (pol.threads > 0) {
#pragma omp parallel for schedule(static) num_threads(pol.threads)
            for (long i = 0; i < static_cast<long>(n); ++i) fn(static_cast<std::size_t>(i));
            return;
        }
#pragma omp parallel for schedule(static)
        for (long i = 0; i < static_cast<long>(n); ++i) fn(static_cast<std::size_t>(i));
        return;
#endif
    }
    for (std::size_t i = 0; i < n; ++i) fn(i);
}

/// argmin with (value, index) lexicographic tie-break; identical result for
/// any thread count.
template <class Eval>
std::pair<double, std::size_t> argmin_reduce(std::size_t n, const ExecPolicy& pol, Eval&& eval) {
    double best_v = std::numeric_limits<double>::infinity();
    std::size_t best_i = n;
    if (pol.parallel) {
#if defined(_OPENMP)
#pragma omp parallel
        {
            double loc_v = std::numeric_limits<double>::infinity();
            std::size_t loc_i = n;
#pragma omp for schedule(static) nowait
            for (long i = 0; i < static_cast<long>(n); ++i) {
                double v = eval(static_cast<std::size_t>(i));
                if (v < loc_v || (v == loc_v && static_cast<std::size_t>(i) < loc_i)) {
                    loc_v = v;
                    loc_i = static_cast<std::size_t>(i);
                }
            }
#pragma omp critical
            {
                if (loc_v < best_v || (loc_v == best_v && loc_i < best_i)) {
                    best_v = loc_v;
                    best_i = loc_i;
                }
            }
        }
        return {best_v, best_i};
#endif
    }
    for (std::size_t i = 0; i < n; ++i) {
        double v = eval(i);
        if (v < best_v) {
            best_v = v;
            best_i = i;
        }
    }
    return {best_v, best_i};
}

/// Dominance comparison with function-value ties treated as equal at tie_tol.
/// Returns true when row y dominates row x: y <= x in every objective and
/// strictly better in at least one.
inline bool dominates(const double* y, const double* x, std::size_t m, double tie_tol) {
    bool strict = false;
    for (std::size_t i = 0; i < m; ++i) {
        double d = y[i] - x[i];
        if (d > tie_tol) return false;
        if (d < -tie_tol) strict = true;
    }
    return strict;
}

/// Per-point non-domination verdicts over a flat row-major objective table.
std::vector<char> nondominated_mask(const std::vector<double>& values, std::size_t m,
                                    double tie_tol, const ExecPolicy& pol);

/// Serial reference implementation kept for testing and benchmarking.
std::vector<char> nondominated_mask_serial(const std::vector<double>& values, std::size_t m,
                                           double tie_tol);

}  // namespace moprox::kernels

#endif
