#include "mixedvol/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mixedvol {

int max_threads() {
    static const int cached = [] {
#ifdef _OPENMP
        int n = omp_get_max_threads();
#else
        int n = 1;
#endif
        if (const char* env = std::getenv("MIXEDVOL_THREADS")) {
            try {
                const int cap = std::stoi(env);
                if (cap >= 1 && cap < n) n = cap;
            } catch (...) {
                // ignore malformed values, keep the OpenMP default
            }
        }
        return n < 1 ? 1 : n;
    }();
    return cached;
}

namespace detail {

double pairwise_fold(std::vector<double>& partial) {
    // In-place pairwise folding in index order.
    std::size_t n = partial.size();
    while (n > 1) {
        const std::size_t half = (n + 1) / 2;
        for (std::size_t i = 0; i + half < n; ++i) partial[i] += partial[i + half];
        n = half;
    }
    return partial[0];
}

}  // namespace detail
}  // namespace mixedvol
