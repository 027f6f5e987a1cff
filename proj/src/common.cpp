#include "hiervar/common.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hiervar {

namespace {
int g_max_threads = 0;
}

void set_max_threads(int n) {
    g_max_threads = n < 0 ? 0 : n;
#ifdef _OPENMP
    if (g_max_threads > 0) {
        omp_set_num_threads(g_max_threads);
    }
#endif
}

int max_threads() { return g_max_threads; }

}  // namespace hiervar
