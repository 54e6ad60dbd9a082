#include "satlab/oracles.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "satlab/kernels.hpp"
#include "satlab/quadrature.hpp"

namespace satlab::oracles {

namespace {

double alpha_exponent(long n) { return 0.5 * (1.0 - 1.0 / static_cast<double>(n)); }

void require_profile_index(long n, long minimum, const char* where) {
  if (n < minimum) {
    throw std::invalid_argument(std::string(where) + ": n >= " + std::to_string(minimum) +
                                " required");
  }
}

}  // namespace

GridFunction exact_sat_ode_solution(const GridFunction& f, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("exact_sat_ode_solution: t >= 0 required");
  GridFunction out(f.size());
  kernels::sat_flow(out.values(), f.values(), t);
  return out;
}

GridFunction exact_sat_transport_solution(const GridFunction& f, double t) {
  GridFunction evolved = exact_sat_ode_solution(f, t);
  const double n = static_cast<double>(f.size());
  const double shift = std::fmod(t, 1.0);
  const double cells = shift * n;
  const double k = std::round(cells);
  if (std::abs(cells - k) > 1e-9 * std::max(1.0, cells)) {
    throw std::invalid_argument("exact_sat_transport_solution: t is not grid aligned");
  }
  GridFunction out(f.size());
  kernels::rotate_left(out.values(), evolved.values(), static_cast<std::size_t>(k));
  return out;
}

double counterexample_value(long n, double xi) {
  require_profile_index(n, 1, "counterexample_value");
  if (!(xi > 0.0)) throw std::invalid_argument("counterexample_value: xi > 0 required");
  const double a = alpha_exponent(n);
  return std::exp(-0.5 * std::log(static_cast<double>(n)) - a * std::log(xi));
}

GridFunction counterexample_profile(long n, std::size_t grid_n) {
  require_profile_index(n, 1, "counterexample_profile");
  const double a = alpha_exponent(n);
  const double log_n = std::log(static_cast<double>(n));
  GridFunction out(grid_n);
  auto v = out.values();
  const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(grid_n);
#pragma omp parallel for schedule(static) if (m >= 8192)
  for (std::ptrdiff_t i = 0; i < m; ++i) {
    const double xi = GridFunction::node(grid_n, static_cast<std::size_t>(i));
    v[static_cast<std::size_t>(i)] = std::exp(-0.5 * log_n - a * std::log(xi));
  }
  return out;
}

double xi_threshold(long n, double t) {
  require_profile_index(n, 2, "xi_threshold");
  if (!(t >= 0.0)) throw std::invalid_argument("xi_threshold: t >= 0 required");
  const double a = alpha_exponent(n);
  const double log_level = 0.5 * std::log(static_cast<double>(n)) + std::log1p(t);
  return std::exp(-log_level / a);
}

double xi_unit_crossing(long n) { return xi_threshold(n, 0.0); }

double norm_lower_bound(long n, double t) {
  require_profile_index(n, 2, "norm_lower_bound");
  if (!(t >= 0.0)) throw std::invalid_argument("norm_lower_bound: t >= 0 required");
  const double nn = static_cast<double>(n);
  const double log_n = std::log(nn);
  const double log1pt = std::log1p(t);
  const double inv = 1.0 / (1.0 - nn);  // negative for n >= 2

  const double term1 = std::exp(inv * (log_n + 2.0 * log1pt));
  double term2 = 0.0;
  double term3 = 0.0;
  if (t > 0.0) {
    term2 = 4.0 * t / (nn + 1.0) * std::exp(inv * (log_n + (1.0 + nn) * log1pt));
    term3 = t * t * std::exp(inv * nn * (log_n + 2.0 * log1pt));
  }
  return term1 - term2 + term3;
}

double norm_lower_bound_antiderivative(long n, double t) {
  require_profile_index(n, 2, "norm_lower_bound_antiderivative");
  const double nn = static_cast<double>(n);
  const double a = alpha_exponent(n);
  const double log_xi = std::log(xi_threshold(n, t));
  // (1/n) xi^{1-2a}/(1-2a) - (2t/sqrt(n)) xi^{1-a}/(1-a) + t^2 xi, at xi_{t,n}.
  const double p1 = std::exp(-std::log(nn) + (1.0 - 2.0 * a) * log_xi) / (1.0 - 2.0 * a);
  const double p2 = 2.0 * t * std::exp(-0.5 * std::log(nn) + (1.0 - a) * log_xi) / (1.0 - a);
  const double p3 = t * t * std::exp(log_xi);
  return p1 - p2 + p3;
}

double counterexample_norm(long n, double t, double rel_tol) {
  require_profile_index(n, 1, "counterexample_norm");
  if (!(t >= 0.0)) throw std::invalid_argument("counterexample_norm: t >= 0 required");
  const double nn = static_cast<double>(n);
  const double a = alpha_exponent(n);

  if (n == 1) {
    // Constant profile f = 1: solution is exp(-t) everywhere.
    return std::exp(-t);
  }

  const double xi_t = xi_threshold(n, t);
  const double xi_1 = xi_unit_crossing(n);

  // Piece 1: (f_n - t)^2 over [0, xi_t] under xi = u^n. The transformed
  // integrand (1 - t/f_n(u^n))^2 is smooth and bounded by 1.
  const double u_t = std::exp(std::log(xi_t) / nn);
  const double half_pow = 0.5 * (nn - 1.0);
  const double sqrt_n = std::sqrt(nn);
  auto piece1_fn = [&](double u) {
    const double inv_f = u <= 0.0 ? 0.0 : sqrt_n * std::exp(half_pow * std::log(u));
    const double g = 1.0 - t * inv_f;
    return g * g;
  };
  const double piece1 = adaptive_simpson(piece1_fn, 0.0, u_t, rel_tol * u_t, 52);

  // Piece 2: exp(2(f_n - 1 - t)) over [xi_t, xi_1], same substitution; the
  // Jacobian n u^{n-1} stays in [(1+t)^{-2}, 1] on this range.
  const double u_1 = std::exp(std::log(xi_1) / nn);
  auto piece2_fn = [&](double u) {
    if (u <= 0.0) return 0.0;
    const double log_u = std::log(u);
    const double f = std::exp(-0.5 * std::log(nn) - half_pow * log_u);
    const double jac = std::exp(std::log(nn) + (nn - 1.0) * log_u);
    return std::exp(2.0 * (f - 1.0 - t)) * jac;
  };
  const double piece2 = t > 0.0
                            ? adaptive_simpson(piece2_fn, u_t, u_1, rel_tol * (u_1 - u_t), 52)
                            : 0.0;

  // Piece 3: exp(-2t) * f_n^2 over [xi_1, 1]; bounded by 1, singular only at
  // the origin which lies outside the range.
  auto f_sq = [&](double xi) { return std::exp(-std::log(nn) - 2.0 * a * std::log(xi)); };
  const double piece3 = std::exp(-2.0 * t) * tanh_sinh(f_sq, xi_1, 1.0, rel_tol).value;

  return std::sqrt(piece1 + piece2 + piece3);
}

WitnessSearch find_witness_n(double t, double threshold, std::span<const long> candidates) {
  if (candidates.empty()) throw std::invalid_argument("find_witness_n: empty candidate list");
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw std::invalid_argument("find_witness_n: threshold in (0,1) required");
  }
  WitnessSearch res;
  res.threshold = threshold;
  const double target = threshold * threshold;
  double best = 0.0;
  for (long n : candidates) {
    const double b = norm_lower_bound(n, t);
    best = std::max(best, b);
    if (b > target) {
      res.n = n;
      res.bound = b;
      return res;
    }
  }
  res.bound = best;
  return res;
}

}  // namespace satlab::oracles
