#include "satlab/feedback.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "satlab/rng.hpp"

namespace satlab {

double sat_scalar(double z) { return kernels::sat_scalar_value(z); }

FeedbackMap FeedbackMap::identity() { return FeedbackMap{}; }

FeedbackMap FeedbackMap::sat() {
  FeedbackMap m;
  m.kind_ = Kind::Sat;
  return m;
}

FeedbackMap FeedbackMap::deadzone_linear(double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("deadzone_linear: delta > 0 required");
  FeedbackMap m;
  m.kind_ = Kind::DeadzoneLinear;
  m.delta_ = delta;
  return m;
}

FeedbackMap FeedbackMap::tabulated(std::vector<std::pair<double, double>> knots) {
  if (knots.size() < 2) throw std::invalid_argument("tabulated: at least two knots required");
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i].first > knots[i - 1].first)) {
      throw std::invalid_argument("tabulated: knot abscissae must be strictly increasing");
    }
  }
  FeedbackMap m;
  m.kind_ = Kind::Tabulated;
  m.knots_z_.reserve(knots.size());
  m.knots_v_.reserve(knots.size());
  for (auto& [z, v] : knots) {
    m.knots_z_.push_back(z);
    m.knots_v_.push_back(v);
  }
  return m;
}

double FeedbackMap::operator()(double z) const {
  switch (kind_) {
    case Kind::Identity:
      return z;
    case Kind::Sat:
      return kernels::sat_scalar_value(z);
    case Kind::DeadzoneLinear:
      return std::clamp(z, -delta_, delta_);
    case Kind::Tabulated: {
      if (z <= knots_z_.front()) return knots_v_.front();
      if (z >= knots_z_.back()) return knots_v_.back();
      const auto it = std::upper_bound(knots_z_.begin(), knots_z_.end(), z);
      const std::size_t hi = static_cast<std::size_t>(it - knots_z_.begin());
      const std::size_t lo = hi - 1;
      const double w = (z - knots_z_[lo]) / (knots_z_[hi] - knots_z_[lo]);
      return knots_v_[lo] + w * (knots_v_[hi] - knots_v_[lo]);
    }
  }
  return z;
}

void FeedbackMap::apply_into(std::span<const double> in, std::span<double> out) const {
  switch (kind_) {
    case Kind::Identity:
      kernels::copy(out, in);
      return;
    case Kind::Sat:
      kernels::clamp_map(out, in, -1.0, 1.0);
      return;
    case Kind::DeadzoneLinear:
      kernels::clamp_map(out, in, -delta_, delta_);
      return;
    case Kind::Tabulated: {
      const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(in.size());
#pragma omp parallel for schedule(static) if (n >= 8192)
      for (std::ptrdiff_t i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = (*this)(in[static_cast<std::size_t>(i)]);
      }
      return;
    }
  }
}

GridFunction apply(const FeedbackMap& sigma, const GridFunction& u) {
  GridFunction out(u.size());
  sigma.apply_into(u.values(), out.values());
  return out;
}

MonotoneReport check_monotone(const FeedbackMap& sigma,
                              std::span<const std::pair<GridFunction, GridFunction>> pairs,
                              double tol) {
  MonotoneReport rep;
  rep.min_pairing = std::numeric_limits<double>::infinity();
  for (const auto& [u, v] : pairs) {
    require_same_size(u, v, "check_monotone");
    const GridFunction du = apply(sigma, u) - apply(sigma, v);
    const double pairing = inner(du, u - v);
    rep.min_pairing = std::min(rep.min_pairing, pairing);
    ++rep.sample_count;
  }
  if (rep.sample_count == 0) rep.min_pairing = 0.0;
  rep.pass = rep.min_pairing >= -tol;
  return rep;
}

LipschitzReport estimate_local_lipschitz(const FeedbackMap& sigma, double r, int sample_count,
                                         std::uint64_t seed, std::size_t grid_n) {
  if (!(r > 0.0)) throw std::invalid_argument("estimate_local_lipschitz: r > 0 required");
  LipschitzReport rep;
  rep.radius = r;
  rep.seed = seed;
  Rng rng(seed);
  double best = 0.0;
  for (int k = 0; k < sample_count; ++k) {
    GridFunction u = scaled_to_l2(rough_profile(rng, grid_n, 1.0), r * canonical(rng));
    GridFunction v;
    if (k % 2 == 0) {
      v = scaled_to_l2(rough_profile(rng, grid_n, 1.0), r * canonical(rng));
    } else {
      // Perturbation pair: probes the local slope near u.
      const double eps = r * std::pow(10.0, -uniform(rng, 1.0, 6.0));
      v = u + scaled_to_l2(rough_profile(rng, grid_n, 1.0), eps);
      if (v.norm_l2() > r) v = scaled_to_l2(v, r);
    }
    const double den = (u - v).norm_l2();
    if (den < 1e-300) continue;
    const double num = (apply(sigma, u) - apply(sigma, v)).norm_l2();
    best = std::max(best, num / den);
    ++rep.sample_count;
  }
  rep.estimate = best;
  return rep;
}

PropertyIvResult check_property_iv(const FeedbackMap& sigma, const GridFunction& u, double tol) {
  PropertyIvResult res;
  const GridFunction su = apply(sigma, u);
  res.lhs = (su - u).norm_l1();
  res.rhs = inner(su, u);
  res.pass = res.lhs <= res.rhs + tol;
  return res;
}

PropertyVResult check_property_v(const FeedbackMap& sigma, const GridFunction& u,
                                 const GridFunction& v) {
  require_same_size(u, v, "check_property_v");
  PropertyVResult res;
  res.value = inner(u, apply(sigma, u + v) - apply(sigma, u));
  const double vn = v.norm_l2();
  if (vn > 0.0) res.ratio = res.value / vn;
  return res;
}

}  // namespace satlab
