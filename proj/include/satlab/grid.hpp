#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "satlab/kernels.hpp"

namespace satlab {

/// Sampled representative of an element of L^2(0,1) on a uniform grid of N
/// cells. Values live at the cell midpoints xi_i = (i + 1/2) / N, which keeps
/// singular profiles like xi^{-a} evaluable (xi = 0 is never a node). All
/// norms and inner products are midpoint-rule approximations of the
/// corresponding integrals over (0,1).
///
/// Operations are pure; a GridFunction is safe to share across threads once
/// constructed.
class GridFunction {
 public:
  GridFunction() = default;
  explicit GridFunction(std::size_t n, double value = 0.0) : values_(n, value) {}

  /// Takes ownership of the samples. Throws std::invalid_argument when the
  /// vector is empty or contains a non-finite entry.
  static GridFunction from_values(std::vector<double> values);

  /// Midpoint of cell i on the unit interval.
  static double node(std::size_t n, std::size_t i) {
    return (static_cast<double>(i) + 0.5) / static_cast<double>(n);
  }

  template <class F>
  static GridFunction sampled(std::size_t n, F&& f) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = f(node(n, i));
    return from_values(std::move(v));
  }

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  double cell_width() const { return 1.0 / static_cast<double>(values_.size()); }

  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  double norm_l2() const;
  double norm_l1() const;
  double norm_linf() const;
  bool all_finite() const;

 private:
  std::vector<double> values_;
};

/// Midpoint approximation of the L^2(0,1) pairing of f and g.
/// Throws std::invalid_argument on a resolution mismatch.
double inner(const GridFunction& f, const GridFunction& g);

GridFunction axpby(double a, const GridFunction& x, double b, const GridFunction& y);
GridFunction operator+(const GridFunction& x, const GridFunction& y);
GridFunction operator-(const GridFunction& x, const GridFunction& y);
GridFunction operator*(double a, const GridFunction& x);

void require_same_size(const GridFunction& f, const GridFunction& g, const char* where);

}  // namespace satlab
