#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "satlab/errors.hpp"
#include "satlab/feedback.hpp"
#include "satlab/grid.hpp"
#include "satlab/kernels.hpp"
#include "satlab/matexp.hpp"

// Generators, semigroup actions and mild-solution integrators for the
// collocated closed loop x' = A x - B sigma(B* x + d). States are either
// GridFunction (grid samples of an L^2(0,1) element) or FiniteVector.
//
// The time stepping is operator splitting with the semigroup part applied
// exactly: the periodic shift is an exact circular rotation of the grid
// (steps must align with the cell width), the scalar/matrix semigroups are
// exact exponentials. The nonlinear substep z' = -B sigma(B* z + d) is
// advanced by classical RK4, or by the exact pointwise flow when sigma is
// the saturation and B = I.

namespace satlab {

using FiniteVector = Eigen::VectorXd;

enum class ShiftMode { Strict, Interpolate };

struct GeneratorSpec {
  enum class Kind { Zero, PeriodicShift, ScalarDiagonal, Matrix };

  Kind kind = Kind::Zero;
  double decay = 0.0;       // ScalarDiagonal: A = -decay * I
  Eigen::MatrixXd mat;      // Matrix kind

  static GeneratorSpec zero() { return {}; }
  static GeneratorSpec periodic_shift() {
    GeneratorSpec g;
    g.kind = Kind::PeriodicShift;
    return g;
  }
  static GeneratorSpec scalar_diagonal(double alpha) {
    GeneratorSpec g;
    g.kind = Kind::ScalarDiagonal;
    g.decay = alpha;
    return g;
  }
  static GeneratorSpec matrix(Eigen::MatrixXd m) {
    if (m.rows() != m.cols() || m.rows() < 1) {
      throw std::invalid_argument("GeneratorSpec::matrix: square matrix required");
    }
    GeneratorSpec g;
    g.kind = Kind::Matrix;
    g.mat = std::move(m);
    return g;
  }
};

/// Bounded input operator B: a scalar multiple of the identity, or an
/// explicit matrix (finite-dimensional states only). B* is the adjoint.
struct InputOp {
  bool is_scalar = true;
  double gain = 1.0;
  Eigen::MatrixXd mat;

  static InputOp identity() { return {}; }
  static InputOp scaled(double b) {
    InputOp op;
    op.gain = b;
    return op;
  }
  static InputOp matrix(Eigen::MatrixXd m) {
    if (m.size() == 0) throw std::invalid_argument("InputOp::matrix: empty matrix");
    InputOp op;
    op.is_scalar = false;
    op.mat = std::move(m);
    return op;
  }

  bool is_identity() const { return is_scalar && gain == 1.0; }
  double operator_norm() const { return is_scalar ? std::abs(gain) : operator_norm2(mat); }
};

struct SystemSpec {
  GeneratorSpec generator;
  InputOp input;
  FeedbackMap sigma;
};

namespace detail {

inline double st_norm(const GridFunction& x) { return x.norm_l2(); }
inline double st_norm(const FiniteVector& x) { return x.norm(); }

inline double st_inner(const GridFunction& x, const GridFunction& y) { return inner(x, y); }
inline double st_inner(const FiniteVector& x, const FiniteVector& y) { return x.dot(y); }

inline GridFunction st_zero_like(const GridFunction& x) { return GridFunction(x.size()); }
inline FiniteVector st_zero_like(const FiniteVector& x) {
  return FiniteVector::Zero(x.size());
}

inline void st_scale(GridFunction& x, double a) { kernels::scale(x.values(), a); }
inline void st_scale(FiniteVector& x, double a) { x *= a; }

inline void st_add_scaled(GridFunction& y, double a, const GridFunction& x) {
  kernels::add_scaled(y.values(), a, x.values());
}
inline void st_add_scaled(FiniteVector& y, double a, const FiniteVector& x) {
  y.noalias() += a * x;
}

inline void st_axpby(GridFunction& out, double a, const GridFunction& x, double b,
                     const GridFunction& y) {
  kernels::axpby(out.values(), a, x.values(), b, y.values());
}
inline void st_axpby(FiniteVector& out, double a, const FiniteVector& x, double b,
                     const FiniteVector& y) {
  out = a * x + b * y;
}

inline void st_sat_flow(GridFunction& x, double t) {
  kernels::sat_flow(x.values(), x.values(), t);
}
inline void st_sat_flow(FiniteVector& x, double t) {
  std::span<double> s(x.data(), static_cast<std::size_t>(x.size()));
  kernels::sat_flow(s, s, t);
}

inline void st_apply_sigma(const FeedbackMap& sigma, const GridFunction& in, GridFunction& out) {
  sigma.apply_into(in.values(), out.values());
}
inline void st_apply_sigma(const FeedbackMap& sigma, const FiniteVector& in, FiniteVector& out) {
  out.resize(in.size());
  sigma.apply_into(std::span<const double>(in.data(), static_cast<std::size_t>(in.size())),
                   std::span<double>(out.data(), static_cast<std::size_t>(out.size())));
}

inline void apply_bstar_into(const InputOp& b, const GridFunction& x, GridFunction& out) {
  kernels::axpby(out.values(), b.gain, x.values(), 0.0, x.values());
}
inline void apply_b_into(const InputOp& b, const GridFunction& u, GridFunction& out) {
  kernels::axpby(out.values(), b.gain, u.values(), 0.0, u.values());
}
inline void apply_bstar_into(const InputOp& b, const FiniteVector& x, FiniteVector& out) {
  if (b.is_scalar) {
    out = b.gain * x;
  } else {
    out.noalias() = b.mat.transpose() * x;
  }
}
inline void apply_b_into(const InputOp& b, const FiniteVector& u, FiniteVector& out) {
  if (b.is_scalar) {
    out = b.gain * u;
  } else {
    out.noalias() = b.mat * u;
  }
}

inline GridFunction u_zero_like(const SystemSpec&, const GridFunction& x) {
  return GridFunction(x.size());
}
inline FiniteVector u_zero_like(const SystemSpec& sys, const FiniteVector& x) {
  return FiniteVector::Zero(sys.input.is_scalar ? x.size() : sys.input.mat.cols());
}

inline void validate_system_state(const SystemSpec& sys, const GridFunction&) {
  if (sys.generator.kind == GeneratorSpec::Kind::Matrix) {
    throw std::invalid_argument("matrix generator requires a finite-dimensional state");
  }
  if (!sys.input.is_scalar) {
    throw std::invalid_argument("matrix input operator requires a finite-dimensional state");
  }
}
inline void validate_system_state(const SystemSpec& sys, const FiniteVector& x) {
  if (sys.generator.kind == GeneratorSpec::Kind::PeriodicShift) {
    throw std::invalid_argument("periodic shift generator acts on grid functions");
  }
  if (sys.generator.kind == GeneratorSpec::Kind::Matrix && sys.generator.mat.rows() != x.size()) {
    throw std::invalid_argument("generator dimension does not match the state");
  }
  if (!sys.input.is_scalar && sys.input.mat.rows() != x.size()) {
    throw std::invalid_argument("input operator dimension does not match the state");
  }
}

}  // namespace detail

/// Piecewise-constant disturbance signal: value i applies on
/// [breakpoints[i], breakpoints[i+1]). Default-constructed = identically 0.
template <class State>
class Disturbance {
 public:
  Disturbance() = default;

  Disturbance(std::vector<double> breakpoints, std::vector<State> values)
      : breaks_(std::move(breakpoints)), values_(std::move(values)) {
    if (breaks_.size() != values_.size() || breaks_.empty()) {
      throw std::invalid_argument("Disturbance: one value per breakpoint required");
    }
    if (breaks_.front() != 0.0) {
      throw std::invalid_argument("Disturbance: breakpoints must start at 0");
    }
    for (std::size_t i = 1; i < breaks_.size(); ++i) {
      if (!(breaks_[i] > breaks_[i - 1])) {
        throw std::invalid_argument("Disturbance: breakpoints must be strictly increasing");
      }
    }
    norms_.reserve(values_.size());
    for (const State& v : values_) norms_.push_back(detail::st_norm(v));
  }

  static Disturbance constant(State v) {
    return Disturbance(std::vector<double>{0.0}, std::vector<State>{std::move(v)});
  }

  bool is_zero() const { return values_.empty(); }

  /// Segment value active at time t; nullptr for the zero signal.
  const State* at(double t) const {
    if (values_.empty()) return nullptr;
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
    const std::size_t idx = it == breaks_.begin() ? 0 : static_cast<std::size_t>(it - breaks_.begin() - 1);
    return &values_[idx];
  }

  double sup_norm() const {
    double m = 0.0;
    for (double v : norms_) m = std::max(m, v);
    return m;
  }

  /// Essential sup of the U-norm over [0, t].
  double sup_norm_until(double t) const {
    double m = 0.0;
    for (std::size_t i = 0; i < breaks_.size(); ++i) {
      if (i > 0 && breaks_[i] > t) break;
      m = std::max(m, norms_[i]);
    }
    return m;
  }

  const std::vector<double>& breakpoints() const { return breaks_; }
  const std::vector<State>& segment_values() const { return values_; }

 private:
  std::vector<double> breaks_;
  std::vector<State> values_;
  std::vector<double> norms_;
};

template <class State>
struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  std::string scheme;
  double dt = 0.0;

  std::size_t size() const { return times.size(); }
  const State& front() const { return states.front(); }
  const State& back() const { return states.back(); }
};

enum class Substep { Auto, ExactSat, Rk4 };
enum class Splitting { Auto, Lie, Strang };

struct IntegrateOptions {
  Substep substep = Substep::Auto;
  Splitting splitting = Splitting::Auto;
  ShiftMode shift_mode = ShiftMode::Strict;
  double blowup_guard = 1e12;
};

/// Action of T(t) for each generator kind. PeriodicShift rotates the grid by
/// t (mod 1); non-aligned shifts throw in Strict mode and linearly
/// interpolate in Interpolate mode (reported through `interpolated`).
GridFunction semigroup_apply(const GeneratorSpec& gen, double t, const GridFunction& x,
                             ShiftMode mode = ShiftMode::Strict, bool* interpolated = nullptr);
FiniteVector semigroup_apply(const GeneratorSpec& gen, double t, const FiniteVector& x);

/// Action of the closed-loop semigroup generated by A - B B*. For a scalar
/// input operator this is e^{-b^2 s} T(s); for matrix data the exponential
/// of A - B B^T.
GridFunction closed_loop_apply(const SystemSpec& sys, double s, const GridFunction& x,
                               ShiftMode mode = ShiftMode::Strict);
FiniteVector closed_loop_apply(const SystemSpec& sys, double s, const FiniteVector& x);

namespace detail {

// Exact semigroup steps at a fixed small set of step sizes; matrix
// exponentials are cached per step size.
template <class State>
class SemigroupStepper {
 public:
  SemigroupStepper(const GeneratorSpec& gen, ShiftMode mode) : gen_(&gen), mode_(mode) {}

  void apply(double h, State& x) {
    if (h == 0.0) return;
    switch (gen_->kind) {
      case GeneratorSpec::Kind::Zero:
        return;
      case GeneratorSpec::Kind::ScalarDiagonal:
        st_scale(x, std::exp(-gen_->decay * h));
        return;
      default:
        break;
    }
    if constexpr (std::is_same_v<State, FiniteVector>) {
      if (gen_->kind == GeneratorSpec::Kind::Matrix) {
        auto it = exp_cache_.find(h);
        if (it == exp_cache_.end()) {
          it = exp_cache_.emplace(h, matrix_exponential(gen_->mat * h)).first;
        }
        x = it->second * x;
        return;
      }
    }
    x = semigroup_step_fallback(h, x);
  }

 private:
  GridFunction semigroup_step_fallback(double h, const GridFunction& x) {
    return semigroup_apply(*gen_, h, x, mode_);
  }
  FiniteVector semigroup_step_fallback(double h, const FiniteVector& x) {
    return semigroup_apply(*gen_, h, x);
  }

  const GeneratorSpec* gen_;
  ShiftMode mode_;
  std::map<double, Eigen::MatrixXd> exp_cache_;
};

template <class State>
struct MildWorkspace {
  State k1, k2, k3, k4, y, u1, u2;

  MildWorkspace(const SystemSpec& sys, const State& x)
      : k1(st_zero_like(x)),
        k2(st_zero_like(x)),
        k3(st_zero_like(x)),
        k4(st_zero_like(x)),
        y(st_zero_like(x)),
        u1(u_zero_like(sys, x)),
        u2(u_zero_like(sys, x)) {}
};

// out = -B sigma(B* z + d)
template <class State>
void closed_loop_rhs(const SystemSpec& sys, const State& z, const State* d, State& out,
                     MildWorkspace<State>& ws) {
  apply_bstar_into(sys.input, z, ws.u1);
  if (d != nullptr) st_add_scaled(ws.u1, 1.0, *d);
  st_apply_sigma(sys.sigma, ws.u1, ws.u2);
  apply_b_into(sys.input, ws.u2, out);
  st_scale(out, -1.0);
}

template <class State>
void nonlinear_substep(const SystemSpec& sys, Substep substep, State& x, const State* d, double h,
                       MildWorkspace<State>& ws) {
  if (substep == Substep::ExactSat) {
    // With B = I and constant d on the step, w = x + d solves w' = -sat(w).
    if (d != nullptr) st_add_scaled(x, 1.0, *d);
    st_sat_flow(x, h);
    if (d != nullptr) st_add_scaled(x, -1.0, *d);
    return;
  }
  closed_loop_rhs(sys, x, d, ws.k1, ws);
  st_axpby(ws.y, 1.0, x, 0.5 * h, ws.k1);
  closed_loop_rhs(sys, ws.y, d, ws.k2, ws);
  st_axpby(ws.y, 1.0, x, 0.5 * h, ws.k2);
  closed_loop_rhs(sys, ws.y, d, ws.k3, ws);
  st_axpby(ws.y, 1.0, x, h, ws.k3);
  closed_loop_rhs(sys, ws.y, d, ws.k4, ws);
  st_add_scaled(x, h / 6.0, ws.k1);
  st_add_scaled(x, h / 3.0, ws.k2);
  st_add_scaled(x, h / 3.0, ws.k3);
  st_add_scaled(x, h / 6.0, ws.k4);
}

inline Substep resolve_substep(const SystemSpec& sys, Substep requested) {
  const bool exact_ok =
      sys.sigma.kind() == FeedbackMap::Kind::Sat && sys.input.is_identity();
  if (requested == Substep::Auto) return exact_ok ? Substep::ExactSat : Substep::Rk4;
  if (requested == Substep::ExactSat && !exact_ok) {
    throw std::invalid_argument("exact substep requires sigma = sat and B = I");
  }
  return requested;
}

inline Splitting resolve_splitting(const SystemSpec& sys, Splitting requested) {
  if (requested != Splitting::Auto) return requested;
  return sys.generator.kind == GeneratorSpec::Kind::PeriodicShift ? Splitting::Lie
                                                                  : Splitting::Strang;
}

}  // namespace detail

/// Mild-solution integrator. Samples the trajectory at every step; the final
/// step is shortened to land exactly on t_end. Throws numeric_failure when
/// the state norm exceeds the blow-up guard (mild solutions of the systems
/// treated here are global, so blow-up indicates misuse).
template <class State>
Trajectory<State> solve_mild(const SystemSpec& sys, const State& x0, const Disturbance<State>& d,
                             double t_end, double dt, const IntegrateOptions& opt = {}) {
  if (!(dt > 0.0)) throw std::invalid_argument("solve_mild: dt > 0 required");
  if (!(t_end >= 0.0)) throw std::invalid_argument("solve_mild: t_end >= 0 required");
  detail::validate_system_state(sys, x0);
  const Substep substep = detail::resolve_substep(sys, opt.substep);
  const Splitting splitting = detail::resolve_splitting(sys, opt.splitting);

  Trajectory<State> traj;
  traj.dt = dt;
  traj.scheme = std::string(splitting == Splitting::Lie ? "lie" : "strang") + "+" +
                (substep == Substep::ExactSat ? "exact-sat" : "rk4");

  State x = x0;
  traj.times.push_back(0.0);
  traj.states.push_back(x);

  detail::MildWorkspace<State> ws(sys, x0);
  detail::SemigroupStepper<State> semigroup(sys.generator, opt.shift_mode);

  const double eps = 1e-12 * std::max(1.0, t_end);
  long k = 0;
  double t = 0.0;
  while (t < t_end - eps) {
    const double t_next = std::min(static_cast<double>(k + 1) * dt, t_end);
    const double h = t_next - t;
    const State* dval = d.at(t);
    if (splitting == Splitting::Strang) {
      semigroup.apply(0.5 * h, x);
      detail::nonlinear_substep(sys, substep, x, dval, h, ws);
      semigroup.apply(0.5 * h, x);
    } else {
      semigroup.apply(h, x);
      detail::nonlinear_substep(sys, substep, x, dval, h, ws);
    }
    t = t_next;
    ++k;
    const double norm = detail::st_norm(x);
    if (!(norm <= opt.blowup_guard)) {
      throw numeric_failure("solve_mild: state norm " + std::to_string(norm) + " at t = " +
                            std::to_string(t) + " exceeds the blow-up guard");
    }
    traj.times.push_back(t);
    traj.states.push_back(x);
  }
  return traj;
}

/// Fixed-point iteration of the variation-of-constants map, discretized with
/// the trapezoidal rule at resolution dt. Starts from the constant-in-time
/// function x0; iterations = 0 returns T(t1) x0. Serves as an independent
/// oracle for solve_mild on contractive horizons; throws numeric_failure
/// when the iterates grow (horizon too long for contraction).
template <class State>
State picard_iterate(const SystemSpec& sys, const State& x0, const Disturbance<State>& d,
                     double t1, int iterations, double dt) {
  if (!(t1 > 0.0)) throw std::invalid_argument("picard_iterate: t1 > 0 required");
  if (!(dt > 0.0)) throw std::invalid_argument("picard_iterate: dt > 0 required");
  if (iterations < 0) throw std::invalid_argument("picard_iterate: iterations >= 0 required");
  detail::validate_system_state(sys, x0);

  const std::size_t m = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(
                                                     std::ceil(t1 / dt - 1e-12))));
  const double h = t1 / static_cast<double>(m);

  detail::SemigroupStepper<State> semigroup(sys.generator, ShiftMode::Strict);

  std::vector<State> free_term;  // T(j h) x0
  free_term.reserve(m + 1);
  free_term.push_back(x0);
  for (std::size_t j = 1; j <= m; ++j) {
    State s = free_term.back();
    semigroup.apply(h, s);
    free_term.push_back(std::move(s));
  }
  if (iterations == 0) return free_term[m];

  detail::MildWorkspace<State> ws(sys, x0);
  std::vector<State> cur(m + 1, x0);
  std::vector<State> next(m + 1, x0);
  std::vector<State> integrand(m + 1, detail::st_zero_like(x0));

  const double reference =
      10.0 * (detail::st_norm(x0) +
              sys.input.operator_norm() * (d.sup_norm_until(t1) + 1.0) * t1 + 1.0);

  for (int it = 0; it < iterations; ++it) {
    for (std::size_t i = 0; i <= m; ++i) {
      detail::closed_loop_rhs(sys, cur[i], d.at(static_cast<double>(i) * h), integrand[i], ws);
      detail::st_scale(integrand[i], -1.0);  // g_i = +B sigma(B* x_i + d_i)
    }
    // Trapezoid prefix: S_j = T(h)(S_{j-1} + (h/2) g_{j-1}) + (h/2) g_j.
    State s = detail::st_zero_like(x0);
    next[0] = x0;
    double worst = detail::st_norm(x0);
    for (std::size_t j = 1; j <= m; ++j) {
      detail::st_add_scaled(s, 0.5 * h, integrand[j - 1]);
      semigroup.apply(h, s);
      detail::st_add_scaled(s, 0.5 * h, integrand[j]);
      next[j] = free_term[j];
      detail::st_add_scaled(next[j], -1.0, s);
      worst = std::max(worst, detail::st_norm(next[j]));
    }
    if (!(worst <= reference)) {
      throw numeric_failure("picard_iterate: iterates growing, horizon is not contractive");
    }
    cur.swap(next);
  }
  return cur[m];
}

struct GronwallRow {
  double t = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs
};

struct GronwallReport {
  std::vector<GronwallRow> rows;
  bool pass = true;
  double worst_margin = std::numeric_limits<double>::infinity();
  double max_sigma_arg_norm = 0.0;  // largest ||B* x + d|| seen; r must dominate it
};

/// Continuous-dependence bound: at each shared sample time,
/// ||x - y|| <= (||x0 - y0|| + int_0^t ||B|| k_r ||d - d~||) e^{t ||B||^2 k_r}.
/// k_r is caller-supplied and must be a Lipschitz constant of sigma on a ball
/// containing every argument that occurs; the report carries the largest
/// argument norm so the caller can verify the radius.
template <class State>
GronwallReport gronwall_check(const Trajectory<State>& tx, const Trajectory<State>& ty,
                              const Disturbance<State>& d, const Disturbance<State>& d_tilde,
                              double k_r, double norm_b, double tol = 1e-9) {
  if (tx.size() != ty.size()) {
    throw std::invalid_argument("gronwall_check: trajectories have different lengths");
  }
  for (std::size_t i = 0; i < tx.size(); ++i) {
    if (std::abs(tx.times[i] - ty.times[i]) > 1e-12 * std::max(1.0, std::abs(tx.times[i]))) {
      throw std::invalid_argument("gronwall_check: time grids differ");
    }
  }

  auto diff_norm = [&](double t) {
    const State* a = d.at(t);
    const State* b = d_tilde.at(t);
    if (a == nullptr && b == nullptr) return 0.0;
    if (a == nullptr) return detail::st_norm(*b);
    if (b == nullptr) return detail::st_norm(*a);
    State tmp = *a;
    detail::st_add_scaled(tmp, -1.0, *b);
    return detail::st_norm(tmp);
  };

  GronwallReport rep;
  State delta0 = tx.states.front();
  detail::st_add_scaled(delta0, -1.0, ty.states.front());
  const double initial_gap = detail::st_norm(delta0);

  double integral = 0.0;
  for (std::size_t i = 0; i < tx.size(); ++i) {
    const double t = tx.times[i];
    if (i > 0) {
      const double t_prev = tx.times[i - 1];
      integral += (t - t_prev) * diff_norm(t_prev);
    }
    State gap = tx.states[i];
    detail::st_add_scaled(gap, -1.0, ty.states[i]);
    GronwallRow row;
    row.t = t;
    row.lhs = detail::st_norm(gap);
    row.rhs = (initial_gap + norm_b * k_r * integral) * std::exp(t * norm_b * norm_b * k_r);
    row.margin = row.rhs - row.lhs;
    rep.worst_margin = std::min(rep.worst_margin, row.margin);
    if (row.lhs > row.rhs + tol) rep.pass = false;

    const State* dx = d.at(t);
    const State* dy = d_tilde.at(t);
    double ax = norm_b * detail::st_norm(tx.states[i]) + (dx ? detail::st_norm(*dx) : 0.0);
    double ay = norm_b * detail::st_norm(ty.states[i]) + (dy ? detail::st_norm(*dy) : 0.0);
    rep.max_sigma_arg_norm = std::max({rep.max_sigma_arg_norm, ax, ay});
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace satlab
