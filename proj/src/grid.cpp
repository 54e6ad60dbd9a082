#include "satlab/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace satlab {

GridFunction GridFunction::from_values(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("GridFunction: N >= 1 required");
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("GridFunction: non-finite sample");
  }
  GridFunction g;
  g.values_ = std::move(values);
  return g;
}

double GridFunction::norm_l2() const {
  if (empty()) return 0.0;
  return std::sqrt(kernels::sum_sq(values()) * cell_width());
}

double GridFunction::norm_l1() const {
  if (empty()) return 0.0;
  return kernels::sum_abs(values()) * cell_width();
}

double GridFunction::norm_linf() const { return kernels::max_abs(values()); }

bool GridFunction::all_finite() const {
  for (double v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void require_same_size(const GridFunction& f, const GridFunction& g, const char* where) {
  if (f.size() != g.size()) {
    throw std::invalid_argument(std::string(where) + ": grid resolution mismatch (" +
                                std::to_string(f.size()) + " vs " + std::to_string(g.size()) +
                                ")");
  }
}

double inner(const GridFunction& f, const GridFunction& g) {
  require_same_size(f, g, "inner");
  return kernels::dot(f.values(), g.values()) * f.cell_width();
}

GridFunction axpby(double a, const GridFunction& x, double b, const GridFunction& y) {
  require_same_size(x, y, "axpby");
  GridFunction out(x.size());
  kernels::axpby(out.values(), a, x.values(), b, y.values());
  return out;
}

GridFunction operator+(const GridFunction& x, const GridFunction& y) {
  return axpby(1.0, x, 1.0, y);
}

GridFunction operator-(const GridFunction& x, const GridFunction& y) {
  return axpby(1.0, x, -1.0, y);
}

GridFunction operator*(double a, const GridFunction& x) {
  GridFunction out = x;
  kernels::scale(out.values(), a);
  return out;
}

}  // namespace satlab
