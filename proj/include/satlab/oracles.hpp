#pragma once

#include <optional>
#include <span>

#include "satlab/grid.hpp"

// Closed-form solutions for the pointwise-saturated systems and the singular
// profile family that defeats uniform decay.
//
// The profile family is f_n(xi) = n^{-1/2} xi^{-a_n} with a_n = (1 - 1/n)/2.
// Every member has unit L2 norm; f_n(xi) = 1 + t has the unique solution
// xi_{t,n} = (sqrt(n)(1+t))^{-1/a_n} for n >= 2, and the mass of the evolved
// solution on [0, xi_{t,n}] admits the closed three-term expression
// implemented by norm_lower_bound. All formulas are evaluated in log space so
// they stay finite for n up to 2^20 and beyond.

namespace satlab::oracles {

/// Pointwise exact solution at time t >= 0 of z' = -sat(z) started from f.
GridFunction exact_sat_ode_solution(const GridFunction& f, double t);

/// Exact solution of the saturated transport equation with periodic
/// boundary: the pointwise ODE solution composed with a left circular shift
/// by t (mod 1). Requires t aligned to the grid (t*N integral within 1e-9).
GridFunction exact_sat_transport_solution(const GridFunction& f, double t);

/// f_n evaluated at one point xi > 0.
double counterexample_value(long n, double xi);

/// Midpoint samples of f_n at resolution N. n >= 1.
GridFunction counterexample_profile(long n, std::size_t grid_n);

/// Unique solution of f_n(xi) = 1 + t. Requires n >= 2 (f_1 is constant).
double xi_threshold(long n, double t);

/// Point where f_n crosses 1, i.e. xi_threshold(n, 0) = n^{-n/(n-1)}.
double xi_unit_crossing(long n);

/// Closed form of the integral of (f_n - t)^2 over [0, xi_{t,n}]; a lower
/// bound for the squared L2 norm of the evolved profile. n >= 2, t >= 0.
double norm_lower_bound(long n, double t);

/// Same integral from the term-by-term antiderivatives evaluated at
/// xi_{t,n}; algebraically identical to norm_lower_bound and kept as a
/// second route for consistency tests.
double norm_lower_bound_antiderivative(long n, double t);

/// Full L2 norm of the evolved profile at time t, by numerical quadrature of
/// the exact solution in three pieces: the singular region [0, xi_{t,n}]
/// (integrated under the substitution xi = u^n, which removes the
/// singularity), the exponential band where f_n is in [1, 1+t), and the
/// linear region beyond xi_unit_crossing. Valid for all n >= 1.
double counterexample_norm(long n, double t, double rel_tol = 1e-10);

struct WitnessSearch {
  std::optional<long> n;   // smallest candidate with bound > threshold^2
  double bound = 0.0;      // norm_lower_bound at the witness (or best seen)
  double threshold = 0.0;
};

/// Scans the candidate list in order and returns the first n whose
/// norm lower bound exceeds threshold^2. threshold in (0,1).
WitnessSearch find_witness_n(double t, double threshold, std::span<const long> candidates);

}  // namespace satlab::oracles
