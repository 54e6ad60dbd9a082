#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "satlab/quadrature.hpp"

using namespace satlab;

TEST_CASE("tanh-sinh handles integrable endpoint singularities") {
  auto inv_sqrt = [](double x) { return 1.0 / std::sqrt(x); };
  const auto r1 = tanh_sinh(inv_sqrt, 0.0, 1.0, 1e-13);
  CHECK(r1.converged);
  CHECK(r1.value == doctest::Approx(2.0).epsilon(1e-12));

  auto strong = [](double x) { return std::pow(x, -0.9); };
  const auto r2 = tanh_sinh(strong, 0.0, 1.0, 1e-12);
  CHECK(r2.converged);
  CHECK(r2.value == doctest::Approx(10.0).epsilon(1e-10));

  auto log_sing = [](double x) { return std::log(x); };
  const auto r3 = tanh_sinh(log_sing, 0.0, 1.0, 1e-13);
  CHECK(r3.value == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("tanh-sinh on smooth integrands") {
  const auto rpoly = tanh_sinh([](double x) { return 3.0 * x * x; }, 0.0, 1.0, 1e-13);
  CHECK(rpoly.value == doctest::Approx(1.0).epsilon(1e-13));
  const auto rsin = tanh_sinh([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 1e-13);
  CHECK(rsin.value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(tanh_sinh([](double) { return 1.0; }, 1.0, 1.0).value == 0.0);
}

TEST_CASE("adaptive Simpson on smooth and kinked integrands") {
  CHECK(adaptive_simpson([](double x) { return x * x * x; }, 0.0, 2.0, 1e-12) ==
        doctest::Approx(4.0).epsilon(1e-12));
  CHECK(adaptive_simpson([](double x) { return std::exp(x); }, 0.0, 1.0, 1e-12) ==
        doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));
  CHECK(adaptive_simpson([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, 1e-12) ==
        doctest::Approx(0.5 * (0.09 + 0.49)).epsilon(1e-10));
}
