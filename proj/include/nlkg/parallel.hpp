#pragma once
//============================================================================
// Thread-count control and a fixed-shape parallel loop. Kernels write to
// per-index slots inside parallel_for and reduce serially afterwards, so
// results are byte-identical for any thread count.
//============================================================================

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nlkg {

// n < 1 restores the hardware default.
void set_threads(int n);
int thread_count();
bool parallel_enabled();

// Runs body(i) for i in [0, n). The serial branch is the reference path;
// the OpenMP branch must only differ in scheduling.
template <class F>
void parallel_for(long n, F&& body) {
#ifdef _OPENMP
  if (parallel_enabled()) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
      body(i);
    }
    return;
  }
#endif
  for (long i = 0; i < n; ++i) {
    body(i);
  }
}

}  // namespace nlkg
