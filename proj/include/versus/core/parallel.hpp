#pragma once

#include <cstddef>
#include <exception>

#ifdef VERSUS_HAVE_OPENMP
#include <omp.h>
#endif

namespace versus {

// Runs fn(i) for i in [0, n). The serial path is the reference implementation;
// the OpenMP path must produce identical results because callers write into
// index-addressed slots and never share mutable state across iterations.
template <typename Fn>
void for_each_index(std::size_t n, bool parallel, Fn&& fn) {
#ifdef VERSUS_HAVE_OPENMP
    if (parallel && n > 1) {
        std::exception_ptr first_error = nullptr;
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            try {
                fn(static_cast<std::size_t>(i));
            } catch (...) {
#pragma omp critical(versus_for_each_index_error)
                {
                    if (!first_error) first_error = std::current_exception();
                }
            }
        }
        if (first_error) std::rethrow_exception(first_error);
        return;
    }
#else
    (void)parallel;
#endif
    for (std::size_t i = 0; i < n; ++i) fn(i);
}

inline bool parallel_available() {
#ifdef VERSUS_HAVE_OPENMP
    return true;
#else
    return false;
#endif
}

}  // namespace versus
