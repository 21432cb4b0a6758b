#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

namespace riskrank {

// Every hot kernel carries both paths. Serial is the reference; Parallel uses
// OpenMP and must produce bit-identical results for any thread count.
enum class Execution { Serial, Parallel };

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace riskrank
