#pragma once

#include <exception>

namespace dpde::detail {

/// fn(i) for i in [begin, end) over `workers` threads. Iterations must be
/// independent; the first exception thrown is rethrown after the loop.
template <class Fn>
void parallel_for(int begin, int end, int workers, Fn&& fn) {
    if (workers <= 1 || end - begin < 2) {
        for (int i = begin; i < end; ++i) fn(i);
        return;
    }
    std::exception_ptr error;
#pragma omp parallel for num_threads(workers) schedule(static)
    for (int i = begin; i < end; ++i) {
        try {
            fn(i);
        } catch (...) {
#pragma omp critical(dpde_parallel_for_error)
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace dpde::detail
