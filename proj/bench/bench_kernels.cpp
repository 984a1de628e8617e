// Benchmark: fast kernels against their serial reference implementations.
//
//   * sine transforms: FFTW-backed pair vs the O(M^2) reference pair,
//   * profile-grid assembly: OpenMP parallel_for vs the serial path.
//
// Each comparison also reports the worst output gap; the parallel grid
// assembly must match the serial one bit for bit (per-index slot writes,
// serial reductions).
#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "nlkg/evolve.hpp"
#include "nlkg/final_data.hpp"
#include "nlkg/parallel.hpp"
#include "nlkg/profiles.hpp"

using namespace nlkg;

namespace {

double now_s() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch())
      .count();
}

template <class F>
double time_loop(int reps, F&& body) {
  const double t0 = now_s();
  for (int k = 0; k < reps; ++k) body();
  return (now_s() - t0) / reps;
}

void bench_transforms() {
  std::printf("sine transform: FFTW pair vs O(M^2) reference\n");
  std::printf("%8s %6s %12s %12s %9s %11s\n", "modes", "reps", "fast_ms",
              "reference_ms", "speedup", "max_gap");
  for (int m : {511, 2047, 8191}) {
    const SineBasis basis(m, 300.0);
    std::vector<double> grid(m);
    for (int i = 0; i < m; ++i) {
      const double r = basis.grid_point(i);
      grid[i] = std::exp(-0.01 * r * r) * std::sin(0.3 * r);
    }
    const int fast_reps = 2000000 / m;
    const int ref_reps = m <= 2047 ? 20 : 4;
    std::vector<double> fast_modes, ref_modes;
    const double fast_ms =
        1e3 * time_loop(fast_reps, [&] { fast_modes = basis.to_modes(grid); });
    const double ref_ms = 1e3 * time_loop(ref_reps, [&] {
      ref_modes = basis.to_modes_reference(grid);
    });
    double gap = 0.0;
    for (int i = 0; i < m; ++i) {
      gap = std::max(gap, std::abs(fast_modes[i] - ref_modes[i]));
    }
    std::printf("%8d %6d %12.4f %12.4f %8.1fx %11.2e\n", m, fast_reps, fast_ms,
                ref_ms, ref_ms / fast_ms, gap);
  }
}

void bench_profile_grid() {
  const int points = 200000;
  const double t = 100.0;
  ProfileConfig pc;
  ProfileFamily family(
      ScatteringData(scaled_to_weight({1.0, 1.3, 0.5, 1.25}, 0.1)), pc);

  auto assemble = [&](std::vector<double>& out) {
    parallel_for(points, [&](long i) {
      const double r = 0.999 * t * double(i) / (points - 1);
      out[i] = family.full_profile(t, r);
    });
  };

  std::vector<double> serial(points), parallel(points);
  set_threads(1);
  const double serial_s = time_loop(3, [&] { assemble(serial); });
  set_threads(0);
  const double parallel_s = time_loop(3, [&] { assemble(parallel); });

  bool identical = true;
  for (int i = 0; i < points; ++i) {
    if (serial[i] != parallel[i]) {
      identical = false;
      break;
    }
  }
  std::printf("\nprofile grid assembly, %d points at t = %g\n", points, t);
  std::printf("  serial   %8.1f ms\n", 1e3 * serial_s);
  std::printf("  parallel %8.1f ms (%d threads), speedup %.1fx\n",
              1e3 * parallel_s, thread_count(), serial_s / parallel_s);
  std::printf("  outputs bitwise identical: %s\n", identical ? "yes" : "NO");
}

}  // namespace

int main() {
  bench_transforms();
  bench_profile_grid();
  return 0;
}
