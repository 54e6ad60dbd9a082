#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "satlab/grid.hpp"

namespace satlab {

/// Scalar saturation: z for |z| < 1, z/|z| otherwise.
double sat_scalar(double z);

/// Pointwise feedback nonlinearity acting coordinatewise on grid values
/// (or on the entries of a finite-dimensional vector). Every map fixes 0;
/// the monotone variants are nondecreasing, which makes the pointwise lift
/// monotone with respect to the L2 pairing.
class FeedbackMap {
 public:
  enum class Kind { Identity, Sat, DeadzoneLinear, Tabulated };

  FeedbackMap() = default;

  static FeedbackMap identity();
  static FeedbackMap sat();
  /// Identity on [-delta, delta], clamped to +-delta outside. delta > 0.
  static FeedbackMap deadzone_linear(double delta);
  /// Piecewise-linear interpolation of (z, value) knots sorted by z,
  /// constant extrapolation outside the table. Monotonicity of the table is
  /// the caller's claim; check_monotone falsifies it when violated.
  static FeedbackMap tabulated(std::vector<std::pair<double, double>> knots);

  Kind kind() const { return kind_; }
  double delta() const { return delta_; }

  double operator()(double z) const;

  void apply_into(std::span<const double> in, std::span<double> out) const;

 private:
  Kind kind_ = Kind::Identity;
  double delta_ = 1.0;
  std::vector<double> knots_z_;
  std::vector<double> knots_v_;
};

GridFunction apply(const FeedbackMap& sigma, const GridFunction& u);

struct MonotoneReport {
  double min_pairing = 0.0;  // min over sampled pairs of <s(u)-s(v), u-v>
  bool pass = true;
  int sample_count = 0;
};

/// Sampling-based falsifier for maximal monotonicity. Pass means no sampled
/// pair violated the pairing inequality beyond `tol`; it is not a proof.
MonotoneReport check_monotone(const FeedbackMap& sigma,
                              std::span<const std::pair<GridFunction, GridFunction>> pairs,
                              double tol = 1e-12);

struct LipschitzReport {
  double radius = 0.0;
  double estimate = 0.0;  // max sampled difference quotient; lower bound on k_r
  int sample_count = 0;
  std::uint64_t seed = 0;
};

/// Monte-Carlo estimate of the local Lipschitz constant on the L2 ball of
/// radius r. Deterministic for a fixed seed. Half of the samples are
/// independent pairs, half are small perturbations of one draw.
LipschitzReport estimate_local_lipschitz(const FeedbackMap& sigma, double r, int sample_count,
                                         std::uint64_t seed, std::size_t grid_n = 64);

struct PropertyIvResult {
  double lhs = 0.0;  // ||sigma(u) - u||_{L1}
  double rhs = 0.0;  // <sigma(u), u>
  bool pass = true;
};

/// Dual-norm inequality of a saturation function with S' = L1(0,1).
PropertyIvResult check_property_iv(const FeedbackMap& sigma, const GridFunction& u,
                                   double tol = 1e-12);

struct PropertyVResult {
  double value = 0.0;                   // <u, sigma(u+v) - sigma(u)>
  std::optional<double> ratio;          // value / ||v||; empty when v = 0
};

/// Cross-term bound used to estimate the constant C0 empirically (as a
/// supremum of `ratio` over samples); never asserted as exact.
PropertyVResult check_property_v(const FeedbackMap& sigma, const GridFunction& u,
                                 const GridFunction& v);

}  // namespace satlab
