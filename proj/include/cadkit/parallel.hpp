#pragma once

#include <cstddef>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cadkit {

// Worker count for the OpenMP kernels. CADKIT_THREADS overrides the OpenMP
// default; 0 or unset means "let the runtime decide".
inline int thread_count() {
#ifdef _OPENMP
    if (const char* env = std::getenv("CADKIT_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// Static-schedule parallel loop over [0, n). Each index is an independent
// work item; outputs must be written to disjoint slots so the result does
// not depend on the worker count.
template <class F>
void parallel_for(std::size_t n, F&& body) {
#ifdef _OPENMP
    const int workers = thread_count();
#pragma omp parallel for num_threads(workers) schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        body(static_cast<std::size_t>(i));
    }
#else
    for (std::size_t i = 0; i < n; ++i) body(i);
#endif
}

// Serial twin of parallel_for, kept for the reference implementations and
// the equivalence tests.
template <class F>
void serial_for(std::size_t n, F&& body) {
    for (std::size_t i = 0; i < n; ++i) body(i);
}

}  // namespace cadkit
