#include "sml/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <thread>

namespace sml {

void for_each_cell_serial(int n, const std::function<void(int)>& fn) {
    for (int i = 0; i < n; ++i) fn(i);
}

void for_each_cell(int n, int threads, const std::function<void(int)>& fn) {
    if (threads == 1) {
        for_each_cell_serial(n, fn);
        return;
    }
#ifdef _OPENMP
    if (threads > 1) {
#pragma omp parallel for schedule(dynamic) num_threads(threads)
        for (int i = 0; i < n; ++i) fn(i);
    } else {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < n; ++i) fn(i);
    }
#else
    for_each_cell_serial(n, fn);
#endif
}

int hardware_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return static_cast<int>(std::thread::hardware_concurrency());
#endif
}

}  // namespace sml
