#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

#include <cstdlib>
#include <string>

namespace graphmatch {

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

// Honor GRAPHMATCH_THREADS if set; call once at process start.
inline void apply_thread_env() {
    if (const char* v = std::getenv("GRAPHMATCH_THREADS")) {
        const int n = std::atoi(v);
        if (n > 0) set_threads(n);
    }
}

} // namespace graphmatch
