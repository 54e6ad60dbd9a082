#include "satlab/lyapunov.hpp"

#include <cmath>

#include "satlab/rng.hpp"

namespace satlab {

double v_eval(const QuadraticSpec& spec, const GridFunction& x) {
  if (spec.p.size() != 0) {
    throw std::invalid_argument("v_eval: grid states support only P = I");
  }
  const double n = x.norm_l2();
  return n * n;
}

double v_eval(const QuadraticSpec& spec, const FiniteVector& x) {
  if (spec.p.size() == 0) return x.squaredNorm();
  if (spec.p.rows() != x.size() || spec.p.cols() != x.size()) {
    throw std::invalid_argument("v_eval: P dimension mismatch");
  }
  return x.dot(spec.p * x);
}

Eigen::MatrixXd solve_lyapunov_finite(const Eigen::MatrixXd& a_tilde) {
  if (a_tilde.rows() != a_tilde.cols() || a_tilde.rows() < 1) {
    throw std::invalid_argument("solve_lyapunov_finite: square matrix required");
  }
  const double abscissa = spectral_abscissa(a_tilde);
  if (!(abscissa < 0.0)) {
    throw std::invalid_argument("solve_lyapunov_finite: matrix is not Hurwitz (abscissa = " +
                                std::to_string(abscissa) + ")");
  }
  const Eigen::Index n = a_tilde.rows();
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);
  // vec(A^T P + P A) = (I kron A^T + A^T kron I) vec(P).
  Eigen::MatrixXd k(n * n, n * n);
  k.setZero();
  const Eigen::MatrixXd at = a_tilde.transpose();
  for (Eigen::Index j = 0; j < n; ++j) {
    k.block(j * n, j * n, n, n) += at;                       // I kron A^T
    for (Eigen::Index i = 0; i < n; ++i) {
      k.block(j * n, i * n, n, n) += at(j, i) * identity;    // A^T kron I
    }
  }
  Eigen::VectorXd rhs(n * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) rhs(j * n + i) = -identity(i, j);
  }
  const Eigen::VectorXd sol = k.fullPivLu().solve(rhs);
  Eigen::MatrixXd p(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) p(i, j) = sol(j * n + i);
  }
  // Symmetrize away the last rounding bits.
  return 0.5 * (p + p.transpose());
}

QuadFormReport check_quadratic_form(const Eigen::MatrixXd& p, const Eigen::MatrixXd& a_tilde,
                                    std::span<const FiniteVector> samples, double tol) {
  QuadFormReport rep;
  for (const FiniteVector& x : samples) {
    const double value = 2.0 * x.dot(p * (a_tilde * x)) + x.squaredNorm();
    rep.max_value = std::max(rep.max_value, value);
    ++rep.sample_count;
  }
  if (rep.sample_count == 0) rep.max_value = 0.0;
  rep.pass = rep.max_value <= tol;
  return rep;
}

Condition30Report check_condition_30(
    std::span<const std::pair<GridFunction, GridFunction>> samples) {
  Condition30Report rep;
  for (const auto& [x, dx] : samples) {
    require_same_size(x, dx, "check_condition_30");
    Condition30Row row;
    row.sup_norm = x.norm_linf();
    row.graph_norm = x.norm_l2() + dx.norm_l2();
    if (row.graph_norm <= 0.0) {
      throw std::invalid_argument("check_condition_30: zero graph norm sample");
    }
    row.ratio = row.sup_norm / row.graph_norm;
    rep.c_estimate = std::max(rep.c_estimate, row.ratio);
    rep.rows.push_back(row);
  }
  return rep;
}

Remark28Report check_remark28_equivalence(const GeneratorSpec& gen, double omega,
                                          const Remark28Options& opt) {
  if (!(omega > 0.0)) throw std::invalid_argument("check_remark28_equivalence: omega > 0");
  Remark28Report rep;

  if (gen.kind == GeneratorSpec::Kind::ScalarDiagonal) {
    // Re<Ax, x> = -decay |x|^2 exactly.
    rep.worst_a = omega - gen.decay;
    rep.worst_c = 1.0 - gen.decay / omega;
    double worst_b = -std::numeric_limits<double>::infinity();
    for (double t : opt.t_grid) {
      worst_b = std::max(worst_b, std::exp((omega - gen.decay) * t) - 1.0);
    }
    rep.worst_b = worst_b;
  } else if (gen.kind == GeneratorSpec::Kind::Matrix) {
    const Eigen::MatrixXd& a = gen.mat;
    const Eigen::Index n = a.rows();
    Rng rng(opt.seed);
    double worst_a = -std::numeric_limits<double>::infinity();
    double worst_c = worst_a;
    auto probe = [&](const FiniteVector& x) {
      const FiniteVector ax = a * x;
      worst_a = std::max(worst_a, x.dot(ax) + omega * x.squaredNorm());
      worst_c = std::max(worst_c, x.dot(ax) / omega + x.squaredNorm());
    };
    for (int k = 0; k < opt.sample_count; ++k) {
      FiniteVector x(n);
      for (Eigen::Index i = 0; i < n; ++i) x(i) = uniform(rng, -1.0, 1.0);
      if (x.norm() == 0.0) continue;
      x.normalize();
      probe(x);
    }
    // The extremal direction of the symmetric part, included so the sampled
    // maximum cannot miss a marginal violation.
    const Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    FiniteVector top = es.eigenvectors().col(n - 1);
    probe(top);
    rep.worst_a = worst_a;
    rep.worst_c = worst_c;

    double worst_b = -std::numeric_limits<double>::infinity();
    for (double t : opt.t_grid) {
      const double norm = operator_norm2(matrix_exponential(a * t));
      worst_b = std::max(worst_b, std::exp(omega * t) * norm - 1.0);
    }
    rep.worst_b = worst_b;
  } else {
    throw std::invalid_argument(
        "check_remark28_equivalence: scalar-diagonal or matrix generator required");
  }

  rep.holds_a = rep.worst_a <= opt.tol;
  rep.holds_b = rep.worst_b <= opt.tol;
  rep.holds_c = rep.worst_c <= opt.tol;
  rep.consistent = rep.holds_a == rep.holds_b && rep.holds_b == rep.holds_c;
  return rep;
}

}  // namespace satlab
