#include "satlab/kernels.hpp"

#include <algorithm>
#include <cassert>
#include <vector>

namespace satlab::kernels {

namespace serial {

double sum(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s;
}

double sum_sq(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

double sum_abs(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += std::abs(v);
  return s;
}

double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

double dot(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size());
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

void fill(std::span<double> out, double value) {
  for (double& v : out) v = value;
}

void copy(std::span<double> out, std::span<const double> in) {
  assert(out.size() == in.size());
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i];
}

void scale(std::span<double> x, double a) {
  for (double& v : x) v *= a;
}

void add_scaled(std::span<double> y, double a, std::span<const double> x) {
  assert(x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

void axpby(std::span<double> out, double a, std::span<const double> x, double b,
           std::span<const double> y) {
  assert(out.size() == x.size() && x.size() == y.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * x[i] + b * y[i];
}

void shift_add(std::span<double> out, std::span<const double> x, double c) {
  assert(out.size() == x.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] + c;
}

void clamp_map(std::span<double> out, std::span<const double> in, double lo, double hi) {
  assert(out.size() == in.size());
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = std::clamp(in[i], lo, hi);
}

void rotate_left(std::span<double> out, std::span<const double> in, std::size_t k) {
  assert(out.size() == in.size());
  const std::size_t n = in.size();
  if (n == 0) return;
  k %= n;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = i + k;
    if (j >= n) j -= n;
    out[i] = in[j];
  }
}

void sat_flow(std::span<double> out, std::span<const double> in, double t) {
  assert(out.size() == in.size());
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = sat_flow_scalar(in[i], t);
}

}  // namespace serial

namespace {

constexpr std::size_t parallel_cutoff = 1 << 13;

// Blockwise reduction folded in block order: the value is identical for any
// thread count, including the single-threaded build.
template <class BlockFn>
double blocked_reduce(std::size_t n, BlockFn&& block, double init, bool maximum) {
  if (n == 0) return init;
  const std::size_t nblocks = (n + reduction_block - 1) / reduction_block;
  if (nblocks == 1) return block(0, n);
  std::vector<double> partial(nblocks);
  if (nblocks < 4) {
    for (std::size_t b = 0; b < nblocks; ++b) {
      const std::size_t lo = b * reduction_block;
      partial[b] = block(lo, std::min(lo + reduction_block, n));
    }
  } else {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nblocks); ++b) {
      const std::size_t lo = static_cast<std::size_t>(b) * reduction_block;
      const std::size_t hi = std::min(lo + reduction_block, n);
      partial[static_cast<std::size_t>(b)] = block(lo, hi);
    }
  }
  double acc = init;
  for (double p : partial) acc = maximum ? std::max(acc, p) : acc + p;
  return acc;
}

}  // namespace

double sum(std::span<const double> x) {
  return blocked_reduce(
      x.size(), [&](std::size_t lo, std::size_t hi) { return serial::sum(x.subspan(lo, hi - lo)); },
      0.0, false);
}

double sum_sq(std::span<const double> x) {
  return blocked_reduce(
      x.size(),
      [&](std::size_t lo, std::size_t hi) { return serial::sum_sq(x.subspan(lo, hi - lo)); }, 0.0,
      false);
}

double sum_abs(std::span<const double> x) {
  return blocked_reduce(
      x.size(),
      [&](std::size_t lo, std::size_t hi) { return serial::sum_abs(x.subspan(lo, hi - lo)); }, 0.0,
      false);
}

double max_abs(std::span<const double> x) {
  return blocked_reduce(
      x.size(),
      [&](std::size_t lo, std::size_t hi) { return serial::max_abs(x.subspan(lo, hi - lo)); }, 0.0,
      true);
}

double dot(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size());
  return blocked_reduce(
      x.size(),
      [&](std::size_t lo, std::size_t hi) {
        return serial::dot(x.subspan(lo, hi - lo), y.subspan(lo, hi - lo));
      },
      0.0, false);
}

void fill(std::span<double> out, double value) {
  if (out.size() < parallel_cutoff) return serial::fill(out, value);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = value;
}

void copy(std::span<double> out, std::span<const double> in) {
  assert(out.size() == in.size());
  if (out.size() < parallel_cutoff) return serial::copy(out, in);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = in[static_cast<std::size_t>(i)];
}

void scale(std::span<double> x, double a) {
  if (x.size() < parallel_cutoff) return serial::scale(x, a);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] *= a;
}

void add_scaled(std::span<double> y, double a, std::span<const double> x) {
  assert(x.size() == y.size());
  if (x.size() < parallel_cutoff) return serial::add_scaled(y, a, x);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    y[static_cast<std::size_t>(i)] += a * x[static_cast<std::size_t>(i)];
}

void axpby(std::span<double> out, double a, std::span<const double> x, double b,
           std::span<const double> y) {
  assert(out.size() == x.size() && x.size() == y.size());
  if (out.size() < parallel_cutoff) return serial::axpby(out, a, x, b, y);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    out[u] = a * x[u] + b * y[u];
  }
}

void shift_add(std::span<double> out, std::span<const double> x, double c) {
  assert(out.size() == x.size());
  if (out.size() < parallel_cutoff) return serial::shift_add(out, x, c);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    out[u] = x[u] + c;
  }
}

void clamp_map(std::span<double> out, std::span<const double> in, double lo, double hi) {
  assert(out.size() == in.size());
  if (out.size() < parallel_cutoff) return serial::clamp_map(out, in, lo, hi);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    out[u] = std::clamp(in[u], lo, hi);
  }
}

void rotate_left(std::span<double> out, std::span<const double> in, std::size_t k) {
  assert(out.size() == in.size());
  if (in.size() < parallel_cutoff) return serial::rotate_left(out, in, k);
  const std::size_t nn = in.size();
  k %= nn;
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(nn);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    std::size_t j = static_cast<std::size_t>(i) + k;
    if (j >= nn) j -= nn;
    out[static_cast<std::size_t>(i)] = in[j];
  }
}

void sat_flow(std::span<double> out, std::span<const double> in, double t) {
  assert(out.size() == in.size());
  if (out.size() < parallel_cutoff) return serial::sat_flow(out, in, t);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    out[u] = sat_flow_scalar(in[u], t);
  }
}

}  // namespace satlab::kernels
