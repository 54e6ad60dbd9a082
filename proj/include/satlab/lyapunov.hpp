#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "satlab/systems.hpp"

// Lyapunov machinery: the quadratic functional V = <Px, x>, the sup-weighted
// functional V(x) = max_s ||e^{omega s / 2} T~(s) x||, a Dini-derivative
// estimator with Richardson extrapolation, the dissipation-chain and ISS
// envelope checks, and the finite-dimensional Lyapunov equation.

namespace satlab {

/// V(x) = <Px, x>. An empty matrix means P = I, the only form supported for
/// grid states.
struct QuadraticSpec {
  Eigen::MatrixXd p;
};

/// V(x) = max over s in [0, s_max] (sampled at s_steps+1 points) of
/// e^{omega s / 2} ||T~(s) x||. Truncation at s_max is sound when
/// m_bound * e^{-omega s_max / 2} <= 1: beyond that point the weighted norm
/// cannot exceed ||x||, which the s = 0 term already contributes.
struct SupWeightedSpec {
  double omega = 1.0;
  double m_bound = 1.0;
  double s_max = 1.0;
  int s_steps = 100;
};

using LyapunovSpec = std::variant<QuadraticSpec, SupWeightedSpec>;

double v_eval(const QuadraticSpec& spec, const GridFunction& x);
double v_eval(const QuadraticSpec& spec, const FiniteVector& x);

template <class State>
double v_eval(const SupWeightedSpec& spec, const SystemSpec& sys, const State& x,
              ShiftMode mode = ShiftMode::Strict) {
  if (!(spec.omega > 0.0) || !(spec.m_bound >= 1.0) || spec.s_steps < 1 || !(spec.s_max >= 0.0)) {
    throw std::invalid_argument("SupWeightedSpec: omega > 0, M >= 1, s_max >= 0, s_steps >= 1");
  }
  if (spec.m_bound * std::exp(-0.5 * spec.omega * spec.s_max) > 1.0 + 1e-12) {
    throw std::invalid_argument("SupWeightedSpec: s_max too small, M e^{-omega s_max/2} > 1");
  }
  double best = detail::st_norm(x);  // s = 0 term
  for (int k = 1; k <= spec.s_steps; ++k) {
    const double s = spec.s_max * static_cast<double>(k) / static_cast<double>(spec.s_steps);
    double weighted;
    if constexpr (std::is_same_v<State, GridFunction>) {
      weighted = std::exp(0.5 * spec.omega * s) * detail::st_norm(closed_loop_apply(sys, s, x, mode));
    } else {
      weighted = std::exp(0.5 * spec.omega * s) * detail::st_norm(closed_loop_apply(sys, s, x));
    }
    best = std::max(best, weighted);
  }
  return best;
}

template <class State>
double v_eval(const LyapunovSpec& spec, const SystemSpec& sys, const State& x,
              ShiftMode mode = ShiftMode::Strict) {
  if (const auto* q = std::get_if<QuadraticSpec>(&spec)) return v_eval(*q, x);
  return v_eval(std::get<SupWeightedSpec>(spec), sys, x, mode);
}

struct DiniEstimate {
  double value = 0.0;
  std::vector<double> steps;       // forward-difference step sizes used
  std::vector<double> quotients;   // raw quotients per step
  bool extrapolated = false;
};

/// Forward-difference estimate of the upper Dini derivative of V along the
/// mild solution, with one Richardson extrapolation over the two smallest
/// steps. Each quotient integrates [0, h] with dt = h / substeps, so the
/// integrator bias shrinks with h and the extrapolation stays consistent.
template <class State>
DiniEstimate dini_derivative(const LyapunovSpec& spec, const SystemSpec& sys, const State& x0,
                             const Disturbance<State>& d,
                             std::vector<double> h_list = {1e-2, 1e-3, 1e-4}, int substeps = 32,
                             const IntegrateOptions& opt = {}) {
  if (h_list.empty()) throw std::invalid_argument("dini_derivative: empty step list");
  for (std::size_t i = 1; i < h_list.size(); ++i) {
    if (!(h_list[i] < h_list[i - 1])) {
      throw std::invalid_argument("dini_derivative: step sizes must be strictly decreasing");
    }
  }
  DiniEstimate est;
  est.steps = h_list;
  const double v0 = v_eval(spec, sys, x0, opt.shift_mode);
  for (double h : h_list) {
    const auto traj = solve_mild(sys, x0, d, h, h / substeps, opt);
    est.quotients.push_back((v_eval(spec, sys, traj.back(), opt.shift_mode) - v0) / h);
  }
  if (est.quotients.size() >= 2) {
    const std::size_t last = est.quotients.size() - 1;
    const double ratio = h_list[last - 1] / h_list[last];
    est.value = (ratio * est.quotients[last] - est.quotients[last - 1]) / (ratio - 1.0);
    est.extrapolated = true;
  } else {
    est.value = est.quotients.front();
  }
  return est;
}

struct DissipationRow {
  double dini = 0.0;
  double bound = 0.0;   // (eps - 2 alpha) |x0|^2 + (k_r |B| |d(0)|)^2 / eps
  double margin = 0.0;  // bound - dini
  bool pass = true;
};

struct DissipationReport {
  std::vector<DissipationRow> rows;
  bool pass = true;
  double worst_margin = std::numeric_limits<double>::infinity();
};

/// Dissipation inequality for V = |x|^2 along the closed loop with
/// Re<Ax, x> <= -alpha |x|^2: the estimated Dini derivative at x0 must stay
/// below (eps - 2 alpha)|x0|^2 + (k_r |B| |d(0)|)^2 / eps. Requires
/// 0 < eps < 2 alpha; tol_scale is a relative margin allowance for the
/// finite-difference estimator.
template <class State>
DissipationReport check_dissipation_chain(
    const SystemSpec& sys, double alpha, double k_r,
    std::span<const std::pair<State, Disturbance<State>>> samples, double eps,
    double tol_scale = 1e-2, const IntegrateOptions& opt = {}) {
  if (!(eps > 0.0 && eps < 2.0 * alpha)) {
    throw std::invalid_argument("check_dissipation_chain: 0 < eps < 2 alpha required");
  }
  const double norm_b = sys.input.operator_norm();
  DissipationReport rep;
  const LyapunovSpec v = QuadraticSpec{};
  for (const auto& [x0, d] : samples) {
    const double x0_sq = detail::st_norm(x0) * detail::st_norm(x0);
    const State* d0 = d.at(0.0);
    const double drive = k_r * norm_b * (d0 ? detail::st_norm(*d0) : 0.0);
    DissipationRow row;
    row.dini = dini_derivative(v, sys, x0, d, {1e-2, 1e-3, 1e-4}, 32, opt).value;
    row.bound = (eps - 2.0 * alpha) * x0_sq + drive * drive / eps;
    row.margin = row.bound - row.dini;
    const double tol = tol_scale * std::max({1.0, x0_sq, drive * drive / eps});
    row.pass = row.dini <= row.bound + tol;
    rep.pass = rep.pass && row.pass;
    rep.worst_margin = std::min(rep.worst_margin, row.margin);
    rep.rows.push_back(row);
  }
  return rep;
}

struct IssRow {
  double t = 0.0;
  double lhs = 0.0;  // ||x(t)||
  double rhs = 0.0;  // e^{-(alpha - eps/2) t} ||x0|| + rho(||d||_inf on [0,t])
};

struct IssReport {
  std::vector<IssRow> rows;
  bool pass = true;
  double worst_ratio = 0.0;
};

/// Explicit ISS envelope obtained from the dissipation inequality by the
/// comparison lemma: beta(r, t) = e^{-(alpha - eps/2) t} r and
/// rho(s) = k_r |B| s / sqrt(eps (2 alpha - eps)).
template <class State>
IssReport check_iss_estimate(const Trajectory<State>& traj, const Disturbance<State>& d,
                             double alpha, double eps, double k_r, double norm_b,
                             double rel_tol = 1e-6) {
  if (!(eps > 0.0 && eps < 2.0 * alpha)) {
    throw std::invalid_argument("check_iss_estimate: 0 < eps < 2 alpha required");
  }
  const double gain = k_r * norm_b / std::sqrt(eps * (2.0 * alpha - eps));
  const double x0_norm = detail::st_norm(traj.states.front());
  IssReport rep;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    IssRow row;
    row.t = traj.times[i];
    row.lhs = detail::st_norm(traj.states[i]);
    row.rhs = std::exp(-(alpha - 0.5 * eps) * row.t) * x0_norm + gain * d.sup_norm_until(row.t);
    rep.rows.push_back(row);
    if (row.rhs > 0.0) rep.worst_ratio = std::max(rep.worst_ratio, row.lhs / row.rhs);
    if (row.lhs > row.rhs * (1.0 + rel_tol) + 1e-12) rep.pass = false;
  }
  return rep;
}

/// Solves A~^T P + P A~ = -I through the Kronecker linear system. Requires
/// A~ Hurwitz (spectral abscissa < 0); the solution is then symmetric
/// positive definite.
Eigen::MatrixXd solve_lyapunov_finite(const Eigen::MatrixXd& a_tilde);

struct QuadFormReport {
  double max_value = -std::numeric_limits<double>::infinity();
  bool pass = true;
  int sample_count = 0;
};

/// Checks 2 Re<A~ x, P x> + <x, x> <= tol over the given sample vectors
/// (the quadratic-form version of the Lyapunov inequality).
QuadFormReport check_quadratic_form(const Eigen::MatrixXd& p, const Eigen::MatrixXd& a_tilde,
                                    std::span<const FiniteVector> samples, double tol = 1e-8);

struct Condition30Row {
  double sup_norm = 0.0;
  double graph_norm = 0.0;
  double ratio = 0.0;
};

struct Condition30Report {
  std::vector<Condition30Row> rows;
  double c_estimate = 0.0;  // max ratio over samples
};

/// Embedding constant for ||B* x||_S <= c ||x||_{D(A)} in the concrete
/// setting B = I, S = L^inf, D(A) a subset of H^1: each sample is a pair
/// (values, derivative values) and contributes
/// ||x||_inf / (||x||_2 + ||x'||_2).
Condition30Report check_condition_30(
    std::span<const std::pair<GridFunction, GridFunction>> samples);

struct Remark28Options {
  int sample_count = 256;
  std::uint64_t seed = 20200801;
  std::vector<double> t_grid = {0.25, 0.5, 1.0, 2.0, 5.0};
  double tol = 1e-9;
};

struct Remark28Report {
  bool holds_a = false;  // Re<Ax, x> <= -omega |x|^2
  bool holds_b = false;  // sup_t ||e^{omega t} T(t)|| <= 1
  bool holds_c = false;  // P = I/omega satisfies Re<Ax, Px> <= -<x, x>
  bool consistent = false;
  double worst_a = 0.0;  // max of Re<Ax,x> + omega|x|^2 over unit samples
  double worst_b = 0.0;  // max of ||e^{omega t} T(t)|| - 1 over the t grid
  double worst_c = 0.0;  // max of Re<Ax,Px> + |x|^2 over unit samples
};

/// Tests the three equivalent characterizations of omega-dissipativity on a
/// scalar-diagonal or matrix generator and reports whether the verdicts
/// agree.
Remark28Report check_remark28_equivalence(const GeneratorSpec& gen, double omega,
                                          const Remark28Options& opt = {});

}  // namespace satlab
