#include "courtloc/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace courtloc::par {

namespace {
int g_max_threads = 0;  // 0 = uninitialized, resolve lazily
}

int max_threads() {
  if (g_max_threads == 0) {
#ifdef _OPENMP
    g_max_threads = omp_get_max_threads();
#else
    g_max_threads = 1;
#endif
  }
  return g_max_threads;
}

void set_max_threads(int n) {
  g_max_threads = n < 1 ? 1 : n;
#ifdef _OPENMP
  omp_set_num_threads(g_max_threads);
#endif
}

bool parallel_enabled() { return max_threads() > 1; }

}  // namespace courtloc::par
