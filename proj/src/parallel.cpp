#include "nlkg/parallel.hpp"

namespace nlkg {

namespace {
int g_threads = 0;  // 0 -> hardware default
}

void set_threads(int n) {
  g_threads = n < 1 ? 0 : n;
#ifdef _OPENMP
  if (g_threads > 0) omp_set_num_threads(g_threads);
#endif
}

int thread_count() {
#ifdef _OPENMP
  return g_threads > 0 ? g_threads : omp_get_max_threads();
#else
  return 1;
#endif
}

bool parallel_enabled() { return thread_count() > 1; }

}  // namespace nlkg
