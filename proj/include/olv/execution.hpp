// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace olv {

/// Slice loops run either on the serial reference path or across OpenMP
/// threads. Both paths produce bitwise-identical results: each slice is an
/// independent computation written to its own output slot.
enum class Execution { serial, parallel };

/// Calls body(m) for m in [0, n). Exceptions thrown by any iteration are
/// rethrown on the calling thread; the one with the lowest index wins.
template <class Body>
void for_each_slice(std::size_t n, Execution exec, Body&& body) {
    if (exec == Execution::serial || n < 2) {
        for (std::size_t m = 0; m < n; ++m) body(m);
        return;
    }
    std::exception_ptr first;
    std::ptrdiff_t first_index = -1;
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t m = 0; m < count; ++m) {
        try {
            body(static_cast<std::size_t>(m));
        } catch (...) {
#pragma omp critical(olv_slice_error)
            {
                if (first_index < 0 || m < first_index) {
                    first_index = m;
                    first = std::current_exception();
                }
            }
        }
    }
    if (first) std::rethrow_exception(first);
}

/// Sets the OpenMP thread count; a no-op without OpenMP or for n == 0.
inline void set_thread_count(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

}  // namespace olv
