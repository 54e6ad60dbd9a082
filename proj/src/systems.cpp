#include "satlab/systems.hpp"

#include <cmath>

namespace satlab {

namespace {

// Decompose a shift by t (mod 1) into whole cells plus a fractional part.
struct ShiftSplit {
  std::size_t cells = 0;
  double fraction = 0.0;  // in [0, 1) cell widths
  bool aligned = true;
};

ShiftSplit split_shift(double t, std::size_t n) {
  const double cells = std::fmod(t, 1.0) * static_cast<double>(n);
  const double rounded = std::round(cells);
  ShiftSplit s;
  if (std::abs(cells - rounded) <= 1e-9 * std::max(1.0, std::abs(cells))) {
    s.cells = static_cast<std::size_t>(rounded) % n;
    return s;
  }
  const double base = std::floor(cells);
  s.cells = static_cast<std::size_t>(base) % n;
  s.fraction = cells - base;
  s.aligned = false;
  return s;
}

}  // namespace

GridFunction semigroup_apply(const GeneratorSpec& gen, double t, const GridFunction& x,
                             ShiftMode mode, bool* interpolated) {
  if (!(t >= 0.0)) throw std::invalid_argument("semigroup_apply: t >= 0 required");
  if (interpolated != nullptr) *interpolated = false;
  switch (gen.kind) {
    case GeneratorSpec::Kind::Zero:
      return x;
    case GeneratorSpec::Kind::ScalarDiagonal:
      return std::exp(-gen.decay * t) * x;
    case GeneratorSpec::Kind::PeriodicShift: {
      const ShiftSplit s = split_shift(t, x.size());
      GridFunction out(x.size());
      if (s.aligned) {
        kernels::rotate_left(out.values(), x.values(), s.cells);
        return out;
      }
      if (mode == ShiftMode::Strict) {
        throw std::invalid_argument(
            "semigroup_apply: shift by t = " + std::to_string(t) +
            " is not grid aligned (strict mode)");
      }
      if (interpolated != nullptr) *interpolated = true;
      GridFunction base(x.size());
      kernels::rotate_left(base.values(), x.values(), s.cells);
      GridFunction next(x.size());
      kernels::rotate_left(next.values(), base.values(), 1);
      kernels::axpby(out.values(), 1.0 - s.fraction, base.values(), s.fraction, next.values());
      return out;
    }
    case GeneratorSpec::Kind::Matrix:
      throw std::invalid_argument("semigroup_apply: matrix generator acts on finite vectors");
  }
  return x;
}

FiniteVector semigroup_apply(const GeneratorSpec& gen, double t, const FiniteVector& x) {
  if (!(t >= 0.0)) throw std::invalid_argument("semigroup_apply: t >= 0 required");
  switch (gen.kind) {
    case GeneratorSpec::Kind::Zero:
      return x;
    case GeneratorSpec::Kind::ScalarDiagonal:
      return std::exp(-gen.decay * t) * x;
    case GeneratorSpec::Kind::Matrix: {
      if (gen.mat.rows() != x.size()) {
        throw std::invalid_argument("semigroup_apply: dimension mismatch");
      }
      return matrix_exponential(gen.mat * t) * x;
    }
    case GeneratorSpec::Kind::PeriodicShift:
      throw std::invalid_argument("semigroup_apply: periodic shift acts on grid functions");
  }
  return x;
}

GridFunction closed_loop_apply(const SystemSpec& sys, double s, const GridFunction& x,
                               ShiftMode mode) {
  if (!sys.input.is_scalar) {
    throw std::invalid_argument("closed_loop_apply: grid states require a scalar input operator");
  }
  // -B B* = -b^2 I commutes with every generator kind here.
  const double damping = std::exp(-sys.input.gain * sys.input.gain * s);
  GridFunction out = semigroup_apply(sys.generator, s, x, mode);
  kernels::scale(out.values(), damping);
  return out;
}

FiniteVector closed_loop_apply(const SystemSpec& sys, double s, const FiniteVector& x) {
  if (sys.input.is_scalar) {
    const double damping = std::exp(-sys.input.gain * sys.input.gain * s);
    return damping * semigroup_apply(sys.generator, s, x);
  }
  const Eigen::Index n = x.size();
  Eigen::MatrixXd a;
  switch (sys.generator.kind) {
    case GeneratorSpec::Kind::Zero:
      a = Eigen::MatrixXd::Zero(n, n);
      break;
    case GeneratorSpec::Kind::ScalarDiagonal:
      a = -sys.generator.decay * Eigen::MatrixXd::Identity(n, n);
      break;
    case GeneratorSpec::Kind::Matrix:
      a = sys.generator.mat;
      break;
    case GeneratorSpec::Kind::PeriodicShift:
      throw std::invalid_argument("closed_loop_apply: periodic shift acts on grid functions");
  }
  a -= sys.input.mat * sys.input.mat.transpose();
  return matrix_exponential(a * s) * x;
}

}  // namespace satlab
