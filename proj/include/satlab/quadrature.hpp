#pragma once

#include <functional>

namespace satlab {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Tanh-sinh (double-exponential) quadrature of f over (a, b). Nodes cluster
/// double-exponentially at both endpoints, so integrable endpoint
/// singularities up to roughly x^{-0.98} converge at full accuracy in double
/// precision. Node abscissae near the endpoints are formed from the distance
/// to the endpoint, never by subtraction, to avoid catastrophic rounding.
QuadratureResult tanh_sinh(const std::function<double(double)>& f, double a, double b,
                           double rel_tol = 1e-12, int max_level = 12);

/// Recursive adaptive Simpson integration; suited to smooth or piecewise
/// smooth integrands. `tol` is an absolute tolerance on the whole interval.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12, int max_depth = 52);

}  // namespace satlab
