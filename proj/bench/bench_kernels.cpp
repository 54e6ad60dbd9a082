#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "satlab/kernels.hpp"
#include "satlab/oracles.hpp"
#include "satlab/rng.hpp"
#include "satlab/systems.hpp"

// Compares the OpenMP kernels against the serial reference implementations
// and times one representative integrator run. Build target: satlab_bench.

namespace {

using clock_type = std::chrono::steady_clock;

template <class F>
double time_ms(F&& fn, int reps) {
  const auto t0 = clock_type::now();
  for (int r = 0; r < reps; ++r) fn();
  const auto t1 = clock_type::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void report(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-22s %10.3f ms %10.3f ms %8.2fx\n", name, serial_ms, parallel_ms,
              parallel_ms > 0 ? serial_ms / parallel_ms : 0.0);
}

}  // namespace

int main() {
  const std::size_t n = 1 << 21;
  satlab::Rng rng(7);
  std::vector<double> a(n), b(n), c(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = satlab::uniform(rng, -3.0, 3.0);
    b[i] = satlab::uniform(rng, -3.0, 3.0);
  }

#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP disabled (serial build)\n");
#endif
  std::printf("N = %zu doubles\n\n", n);
  std::printf("%-22s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

  volatile double sink = 0.0;
  const int reps = 20;

  report("sum_sq",
         time_ms([&] { sink = satlab::kernels::serial::sum_sq(a); }, reps),
         time_ms([&] { sink = satlab::kernels::sum_sq(a); }, reps));
  report("dot",
         time_ms([&] { sink = satlab::kernels::serial::dot(a, b); }, reps),
         time_ms([&] { sink = satlab::kernels::dot(a, b); }, reps));
  report("max_abs",
         time_ms([&] { sink = satlab::kernels::serial::max_abs(a); }, reps),
         time_ms([&] { sink = satlab::kernels::max_abs(a); }, reps));
  report("axpby",
         time_ms([&] { satlab::kernels::serial::axpby(c, 1.5, a, -0.5, b); }, reps),
         time_ms([&] { satlab::kernels::axpby(c, 1.5, a, -0.5, b); }, reps));
  report("clamp_map",
         time_ms([&] { satlab::kernels::serial::clamp_map(c, a, -1.0, 1.0); }, reps),
         time_ms([&] { satlab::kernels::clamp_map(c, a, -1.0, 1.0); }, reps));
  report("sat_flow",
         time_ms([&] { satlab::kernels::serial::sat_flow(c, a, 0.25); }, reps),
         time_ms([&] { satlab::kernels::sat_flow(c, a, 0.25); }, reps));
  report("rotate_left",
         time_ms([&] { satlab::kernels::serial::rotate_left(c, a, n / 3); }, reps),
         time_ms([&] { satlab::kernels::rotate_left(c, a, n / 3); }, reps));

  // One representative mild-solution run (saturated transport, exact shift).
  const std::size_t grid_n = 1 << 16;
  satlab::SystemSpec sys;
  sys.generator = satlab::GeneratorSpec::periodic_shift();
  sys.sigma = satlab::FeedbackMap::sat();
  const satlab::GridFunction x0 = satlab::rough_profile(rng, grid_n, 3.0);
  satlab::Disturbance<satlab::GridFunction> d;
  const double solve_ms = time_ms(
      [&] { sink = satlab::solve_mild(sys, x0, d, 1.0, 1.0 / 256.0).back().norm_l2(); }, 3);
  std::printf("\nsolve_mild transport N=%zu, 256 steps: %.1f ms\n", grid_n, solve_ms);
  (void)sink;
  return 0;
}
