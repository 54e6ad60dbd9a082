#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "satlab/grid.hpp"
#include "satlab/rng.hpp"

using namespace satlab;

TEST_CASE("midpoint norms on reference functions") {
  CHECK(GridFunction(17, 1.0).norm_l2() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(GridFunction(64, -2.0).norm_l1() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(GridFunction(8, 0.0).norm_l1() == 0.0);
  CHECK(GridFunction(5, 3.0).norm_linf() == 3.0);

  const auto ramp_large = GridFunction::sampled(1000000, [](double xi) { return xi; });
  CHECK(ramp_large.norm_l2() == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-4));
  CHECK(inner(ramp_large, GridFunction(1000000, 1.0)) == doctest::Approx(0.5).epsilon(1e-4));

  const auto centered = GridFunction::sampled(1000000, [](double xi) { return xi - 0.5; });
  CHECK(centered.norm_l1() == doctest::Approx(0.25).epsilon(1e-4));

  const auto ramp_small = GridFunction::sampled(100, [](double xi) { return xi; });
  CHECK(ramp_small.norm_linf() == doctest::Approx(0.995).epsilon(1e-14));
}

TEST_CASE("inner product basics") {
  CHECK(inner(GridFunction(12, 1.0), GridFunction(12, 1.0)) == doctest::Approx(1.0));
  CHECK(inner(GridFunction(12, 2.0), GridFunction(12, 3.0)) == doctest::Approx(6.0));
  CHECK_THROWS_AS(inner(GridFunction(12), GridFunction(13)), std::invalid_argument);
}

TEST_CASE("construction rejects invalid samples") {
  CHECK_THROWS_AS(GridFunction::from_values({}), std::invalid_argument);
  CHECK_THROWS_AS(GridFunction::from_values({1.0, std::nan("")}), std::invalid_argument);
  CHECK_THROWS_AS(GridFunction::from_values({1.0, std::numeric_limits<double>::infinity()}),
                  std::invalid_argument);
}

TEST_CASE("Cauchy-Schwarz and norm ordering on random samples") {
  Rng rng(42);
  for (int k = 0; k < 200; ++k) {
    const auto f = rough_profile(rng, 128, uniform(rng, 0.1, 8.0));
    const auto g = smooth_profile(rng, 128, uniform(rng, 0.1, 8.0));
    CHECK(std::abs(inner(f, g)) <= f.norm_l2() * g.norm_l2() * (1.0 + 1e-12));
    // On the unit interval the measure is a probability measure.
    CHECK(f.norm_l1() <= f.norm_l2() * (1.0 + 1e-12));
    CHECK(f.norm_l2() <= f.norm_linf() * (1.0 + 1e-12));
  }
}

TEST_CASE("refinement consistency is second order for smooth functions") {
  // Non-periodic choice: the midpoint rule is exact on trigonometric
  // polynomials over full periods, which would hide the O(N^-2) error.
  auto l2_at = [](std::size_t n) {
    return GridFunction::sampled(n, [](double xi) { return std::exp(xi) + 0.5 * xi * xi; })
        .norm_l2();
  };
  const double e64 = std::abs(l2_at(64) - l2_at(128));
  const double e128 = std::abs(l2_at(128) - l2_at(256));
  CHECK(e64 / e128 == doctest::Approx(4.0).epsilon(0.25));
}
