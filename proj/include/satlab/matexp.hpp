#pragma once

#include <Eigen/Dense>

namespace satlab {

/// Matrix exponential by scaling and squaring with a degree-13 Pade
/// approximant. Accurate to machine precision for the moderate dimensions
/// used here.
Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& a);

/// Largest real part of the spectrum.
double spectral_abscissa(const Eigen::MatrixXd& a);

/// Induced 2-norm (largest singular value).
double operator_norm2(const Eigen::MatrixXd& a);

/// Largest eigenvalue of the symmetric part (A + A^T)/2; the sharp constant
/// in Re<Ax, x> <= c |x|^2.
double symmetric_part_max_eigenvalue(const Eigen::MatrixXd& a);

}  // namespace satlab
