#pragma once

#include <cmath>
#include <cstddef>
#include <span>

// Data-parallel primitives shared by the grid, oracle and integrator code.
//
// Every kernel exists twice: the default version (OpenMP-parallel when the
// project is built with OpenMP) and a plain-loop twin under kernels::serial
// that is kept as the reference implementation for tests and benchmarks.
//
// Reductions are computed blockwise with a fixed block size and folded in
// block order, so their result does not depend on the number of threads.

namespace satlab::kernels {

inline constexpr std::size_t reduction_block = 4096;

// Exact flow of the scalar saturated ODE z' = -sat(z) over time t >= 0:
// constant drift while |z| >= 1, exponential decay once the linear region
// is reached. Ties at |z| = 1 + t land in the drift branch; the flow is
// continuous across all branch boundaries and odd in f.
inline double sat_flow_scalar(double f, double t) {
  if (f >= 1.0 + t) return f - t;
  if (f <= -1.0 - t) return f + t;
  if (f >= 1.0) return std::exp(f - 1.0 - t);
  if (f <= -1.0) return -std::exp(-f - 1.0 - t);
  return std::exp(-t) * f;
}

inline double sat_scalar_value(double z) {
  if (z >= 1.0) return 1.0;
  if (z <= -1.0) return -1.0;
  return z;
}

namespace serial {

double sum(std::span<const double> x);
double sum_sq(std::span<const double> x);
double sum_abs(std::span<const double> x);
double max_abs(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);

void fill(std::span<double> out, double value);
void copy(std::span<double> out, std::span<const double> in);
void scale(std::span<double> x, double a);
void add_scaled(std::span<double> y, double a, std::span<const double> x);
void axpby(std::span<double> out, double a, std::span<const double> x, double b,
           std::span<const double> y);
void shift_add(std::span<double> out, std::span<const double> x, double c);
void clamp_map(std::span<double> out, std::span<const double> in, double lo, double hi);
void rotate_left(std::span<double> out, std::span<const double> in, std::size_t k);
void sat_flow(std::span<double> out, std::span<const double> in, double t);

}  // namespace serial

double sum(std::span<const double> x);
double sum_sq(std::span<const double> x);
double sum_abs(std::span<const double> x);
double max_abs(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);

void fill(std::span<double> out, double value);
void copy(std::span<double> out, std::span<const double> in);
void scale(std::span<double> x, double a);
void add_scaled(std::span<double> y, double a, std::span<const double> x);
void axpby(std::span<double> out, double a, std::span<const double> x, double b,
           std::span<const double> y);
void shift_add(std::span<double> out, std::span<const double> x, double c);
void clamp_map(std::span<double> out, std::span<const double> in, double lo, double hi);
void rotate_left(std::span<double> out, std::span<const double> in, std::size_t k);
void sat_flow(std::span<double> out, std::span<const double> in, double t);

}  // namespace satlab::kernels
