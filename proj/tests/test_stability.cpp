#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "satlab/stability.hpp"

using namespace satlab;

namespace {

SystemSpec make_system(GeneratorSpec gen, InputOp b, FeedbackMap sigma) {
  SystemSpec sys;
  sys.generator = std::move(gen);
  sys.input = std::move(b);
  sys.sigma = std::move(sigma);
  return sys;
}

SystemSpec saturated_pointwise() {
  return make_system(GeneratorSpec::zero(), InputOp::identity(), FeedbackMap::sat());
}

}  // namespace

TEST_CASE("GAS classification") {
  const auto sys = saturated_pointwise();

  SUBCASE("sampled family members decay to zero") {
    std::vector<GridFunction> profiles;
    for (long n : {2L, 10L}) profiles.push_back(oracles::counterexample_profile(n, 4096));
    const auto rep = classify_gas(sys, profiles, 1000.0, 1e-3);
    CHECK(rep.pass);
    for (const auto& s : rep.series) {
      CHECK(s.monotone);
      CHECK(s.final_norm <= 1e-3);
    }
  }

  SUBCASE("zero initial state passes trivially") {
    const auto rep = classify_gas(sys, {GridFunction(64, 0.0)}, 10.0, 1e-6);
    CHECK(rep.pass);
  }

  SUBCASE("without feedback the norm never decays") {
    const auto frozen =
        make_system(GeneratorSpec::zero(), InputOp::scaled(0.0), FeedbackMap::sat());
    GasOptions opt;
    opt.dt = 0.1;
    const auto rep = classify_gas(frozen, {GridFunction(64, 1.0)}, 10.0, 1e-3, opt);
    CHECK_FALSE(rep.pass);
    CHECK(rep.series[0].monotone);  // constant norm is still nonincreasing
    CHECK(rep.series[0].final_norm == doctest::Approx(1.0));
  }
}

TEST_CASE("UGAS falsification through the singular family") {
  const std::vector<double> t_grid{0.5, 1.0, 5.0, 10.0};

  SUBCASE("pointwise saturated system is falsified at every t") {
    const auto rep = falsify_ugas(saturated_pointwise(), t_grid);
    CHECK(rep.falsified);
    REQUIRE(rep.witnesses.size() == 4);
    for (const auto& w : rep.witnesses) {
      CHECK(w.found);
      CHECK(w.confirmed);
      CHECK(w.bound > 0.25);
      CHECK(w.quad_norm > 0.5);
      // Double confirmation: the closed-form bound really undershoots the
      // quadrature norm.
      CHECK(w.bound <= w.quad_norm * w.quad_norm * (1.0 + 1e-9));
    }
    CHECK(rep.witnesses[0].n == 4);
    CHECK(rep.witnesses[3].n == 8);
  }

  SUBCASE("transport system has identical witness norms") {
    const auto transport = make_system(GeneratorSpec::periodic_shift(), InputOp::identity(),
                                       FeedbackMap::sat());
    const auto a = falsify_ugas(saturated_pointwise(), t_grid);
    const auto b = falsify_ugas(transport, t_grid);
    REQUIRE(a.witnesses.size() == b.witnesses.size());
    for (std::size_t i = 0; i < a.witnesses.size(); ++i) {
      CHECK(a.witnesses[i].n == b.witnesses[i].n);
      CHECK(a.witnesses[i].quad_norm == b.witnesses[i].quad_norm);
    }
    CHECK(b.falsified);
  }

  SUBCASE("linear feedback decays uniformly past ln 2") {
    const auto linear =
        make_system(GeneratorSpec::zero(), InputOp::identity(), FeedbackMap::identity());
    const auto rep = falsify_ugas(linear, std::vector<double>{0.5, 1.0, 5.0});
    CHECK_FALSE(rep.falsified);
    CHECK(rep.witnesses[0].found);        // e^{-0.5} > 1/2
    CHECK_FALSE(rep.witnesses[1].found);  // e^{-1} < 1/2
    CHECK_FALSE(rep.witnesses[2].found);
    CHECK(rep.envelope[0] == doctest::Approx(std::exp(-0.5)));
  }

  SUBCASE("envelope dominates the witnesses and decays") {
    const auto rep = falsify_ugas(saturated_pointwise(), t_grid);
    for (std::size_t i = 0; i < rep.witnesses.size(); ++i) {
      CHECK(rep.envelope[i] >= rep.witnesses[i].quad_norm * (1.0 - 1e-12));
      CHECK(rep.envelope[i] <= 1.0 + 1e-9);  // the family has unit norm at t = 0
      // Contraction systems have a nonincreasing family envelope.
      if (i > 0) CHECK(rep.envelope[i] <= rep.envelope[i - 1] * (1.0 + 1e-9));
    }
  }

  SUBCASE("systems without an exact family evaluator are rejected") {
    const auto sd = make_system(GeneratorSpec::scalar_diagonal(1.0), InputOp::identity(),
                                FeedbackMap::sat());
    CHECK_THROWS_AS(falsify_ugas(sd, t_grid), std::invalid_argument);
  }
}

TEST_CASE("semi-global decay fitting") {
  SUBCASE("recovers the rate of a purely linear system within 2%") {
    const auto sys = make_system(GeneratorSpec::scalar_diagonal(0.7), InputOp::scaled(0.0),
                                 FeedbackMap::identity());
    const auto sampler = make_da_ball_sampler(sys.generator, 128);
    const auto rep =
        fit_semiglobal(sys, std::vector<double>{0.5, 2.0}, 6, 4.0, 0.01, sampler, 99);
    REQUIRE(rep.rows.size() == 2);
    for (const auto& row : rep.rows) {
      CHECK(row.mu_fit == doctest::Approx(0.7).epsilon(0.02));
      CHECK(row.k_fit == doctest::Approx(1.0).epsilon(0.02));
    }
    CHECK(rep.all_rates_positive);
  }

  SUBCASE("small graph-norm transport profiles stay linear and decay at rate 1") {
    const auto transport = make_system(GeneratorSpec::periodic_shift(), InputOp::identity(),
                                       FeedbackMap::sat());
    const auto sampler = make_da_ball_sampler(transport.generator, 256);
    const auto rep = fit_semiglobal(transport, std::vector<double>{0.5}, 6, 4.0, 1.0 / 64.0,
                                    sampler, 7);
    REQUIRE(rep.rows.size() == 1);
    CHECK(rep.rows[0].mu_fit == doctest::Approx(1.0).epsilon(0.05));
    CHECK(rep.rows[0].k_fit <= 1.1);
  }

  SUBCASE("singular family defeats a uniform rate at unit radius") {
    // For A = 0 the graph norm equals the L2 norm, so every f_n sits on the
    // radius-1 sphere, yet the fitted rate collapses far below the linear
    // benchmark mu = 1.
    std::vector<GridFunction> family;
    for (long n : {2L, 10L, 100L}) family.push_back(oracles::counterexample_profile(n, 8192));
    const auto row = fit_decay_profiles(saturated_pointwise(), family, 1.0, 10.0, 0.25);
    CHECK(row.samples == 3);
    CHECK(row.mu_fit < 0.5);
    CHECK(row.mu_fit > 0.0);
    CHECK(row.k_fit >= 1.0);
  }
}

TEST_CASE("ISS gain sweep") {
  SUBCASE("zero amplitude gives zero response; table is monotone") {
    const auto sys = make_system(GeneratorSpec::scalar_diagonal(1.0), InputOp::identity(),
                                 FeedbackMap::sat());
    const std::vector<double> amps{0.0, 0.1, 0.5, 1.0};
    const auto table = fit_iss_gain(sys, amps, 64, 8.0, 1e-2);
    REQUIRE(table.size() == 4);
    CHECK(table[0].sup_response == 0.0);
    for (std::size_t i = 1; i < table.size(); ++i) {
      CHECK(table[i].sup_response >= table[i - 1].sup_response - 1e-12);
    }
    // rho(0.1) = 0.1 bounds the small-amplitude response.
    CHECK(table[1].sup_response <= 0.1 + 1e-9);
  }

  SUBCASE("transport response keeps growing with the amplitude") {
    const auto transport = make_system(GeneratorSpec::periodic_shift(), InputOp::identity(),
                                       FeedbackMap::sat());
    const std::vector<double> amps{0.5, 1.0, 2.0};
    const auto table = fit_iss_gain(transport, amps, 128, 10.0, 1.0 / 32.0);
    CHECK(table[2].sup_response > table[0].sup_response);
    CHECK(table[2].sup_response >= 1.5);  // tracks the amplitude, no saturation of the gain
  }
}
