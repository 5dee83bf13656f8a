#include "propsign/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef PROPSIGN_HAVE_OPENMP
#include <omp.h>
#endif

namespace propsign {

int max_threads() {
#ifdef PROPSIGN_HAVE_OPENMP
    int limit = omp_get_max_threads();
    if (const char* env = std::getenv("PROPSIGN_THREADS")) {
        try {
            const int cap = std::stoi(env);
            if (cap >= 1 && cap < limit) limit = cap;
        } catch (...) {
            // unparsable value: keep the OpenMP default
        }
    }
    return limit < 1 ? 1 : limit;
#else
    return 1;
#endif
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  bool parallel) {
#ifdef PROPSIGN_HAVE_OPENMP
    if (parallel && n > 1) {
        const int threads = max_threads();
#pragma omp parallel for schedule(static) num_threads(threads)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            fn(static_cast<std::size_t>(i));
        }
        return;
    }
#else
    (void)parallel;
#endif
    for (std::size_t i = 0; i < n; ++i) fn(i);
}

}  // namespace propsign
