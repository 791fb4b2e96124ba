#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <utility>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace fedeval {

// Runs body(i) for i in [0, n). workers <= 1 takes the serial reference
// path; otherwise the loop fans out over OpenMP threads. Bodies must write
// disjoint, pre-sized slots so placement (not arrival order) determines the
// result and worker count never changes output bytes. The first exception
// thrown by any iteration is rethrown after the loop drains.
template <class F>
void parallel_for(std::size_t n, int workers, F&& body) {
#if defined(_OPENMP)
    if (workers > 1 && n > 1) {
        std::exception_ptr failure;
        std::mutex failure_mu;
#pragma omp parallel for num_threads(workers) schedule(dynamic)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            try {
                body(static_cast<std::size_t>(i));
            } catch (...) {
                std::lock_guard lock(failure_mu);
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
        return;
    }
#else
    (void)workers;
#endif
    for (std::size_t i = 0; i < n; ++i) body(i);
}

} // namespace fedeval
