#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "satlab/kernels.hpp"
#include "satlab/rng.hpp"

using namespace satlab;

namespace {

std::vector<double> random_values(std::size_t n, std::uint64_t seed, double amp = 3.0) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = uniform(rng, -amp, amp);
  return v;
}

}  // namespace

TEST_CASE("parallel kernels match the serial reference") {
  for (std::size_t n : {std::size_t{1}, std::size_t{7}, std::size_t{4096}, std::size_t{100000}}) {
    const auto a = random_values(n, 11 + n);
    const auto b = random_values(n, 31 + n);
    std::vector<double> out_p(n), out_s(n);

    // Elementwise maps are bitwise identical.
    kernels::axpby(out_p, 1.5, a, -0.25, b);
    kernels::serial::axpby(out_s, 1.5, a, -0.25, b);
    CHECK(out_p == out_s);

    kernels::clamp_map(out_p, a, -1.0, 1.0);
    kernels::serial::clamp_map(out_s, a, -1.0, 1.0);
    CHECK(out_p == out_s);

    kernels::sat_flow(out_p, a, 0.7);
    kernels::serial::sat_flow(out_s, a, 0.7);
    CHECK(out_p == out_s);

    kernels::rotate_left(out_p, a, n / 3);
    kernels::serial::rotate_left(out_s, a, n / 3);
    CHECK(out_p == out_s);

    // Blocked reductions agree with plain sums to rounding.
    CHECK(kernels::sum_sq(a) == doctest::Approx(kernels::serial::sum_sq(a)).epsilon(1e-13));
    CHECK(kernels::sum_abs(a) == doctest::Approx(kernels::serial::sum_abs(a)).epsilon(1e-13));
    CHECK(kernels::dot(a, b) == doctest::Approx(kernels::serial::dot(a, b)).epsilon(1e-12));
    CHECK(kernels::max_abs(a) == kernels::serial::max_abs(a));
  }
}

TEST_CASE("blocked reductions are reproducible") {
  const auto a = random_values(1 << 17, 5);
  const double first = kernels::sum_sq(a);
  for (int r = 0; r < 5; ++r) CHECK(kernels::sum_sq(a) == first);
}

TEST_CASE("scalar saturated flow branches") {
  CHECK(kernels::sat_flow_scalar(2.0, 0.5) == doctest::Approx(1.5));
  CHECK(kernels::sat_flow_scalar(0.5, 1.0) == doctest::Approx(0.5 * std::exp(-1.0)));
  CHECK(kernels::sat_flow_scalar(1.2, 1.0) == doctest::Approx(std::exp(-0.8)));
  CHECK(kernels::sat_flow_scalar(-3.0, 1.0) == doctest::Approx(-2.0));
  CHECK(kernels::sat_flow_scalar(-1.2, 1.0) == doctest::Approx(-std::exp(-0.8)));
  CHECK(kernels::sat_flow_scalar(0.0, 3.0) == 0.0);

  SUBCASE("identity at t = 0") {
    for (double f : {-5.0, -1.0, -0.3, 0.0, 0.99, 1.0, 4.2}) {
      CHECK(kernels::sat_flow_scalar(f, 0.0) == doctest::Approx(f).epsilon(1e-15));
    }
  }

  SUBCASE("continuity across branch boundaries") {
    for (double t : {0.1, 1.0, 7.0}) {
      for (double edge : {1.0 + t, 1.0, -1.0, -1.0 - t}) {
        const double lo = kernels::sat_flow_scalar(edge - 1e-9, t);
        const double hi = kernels::sat_flow_scalar(edge + 1e-9, t);
        CHECK(std::abs(hi - lo) < 1e-8);
      }
    }
  }

  SUBCASE("pointwise contraction toward zero") {
    Rng rng(3);
    for (int k = 0; k < 2000; ++k) {
      const double f = uniform(rng, -6.0, 6.0);
      const double t = uniform(rng, 0.0, 20.0);
      CHECK(std::abs(kernels::sat_flow_scalar(f, t)) <= std::abs(f) + 1e-15);
    }
  }
}

TEST_CASE("rotation composes and wraps") {
  const auto a = random_values(240, 9);
  std::vector<double> full(a.size()), two(a.size()), tmp(a.size());
  kernels::rotate_left(full, a, a.size());
  CHECK(full == a);
  kernels::rotate_left(tmp, a, 100);
  kernels::rotate_left(two, tmp, 140);
  CHECK(two == a);
}
