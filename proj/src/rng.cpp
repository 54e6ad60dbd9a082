#include "satlab/rng.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace satlab {

GridFunction rough_profile(Rng& rng, std::size_t n, double amplitude) {
  std::vector<double> v(n);
  for (auto& x : v) x = uniform(rng, -amplitude, amplitude);
  return GridFunction::from_values(std::move(v));
}

GridFunction smooth_profile(Rng& rng, std::size_t n, double amplitude, int modes) {
  std::vector<double> a(static_cast<std::size_t>(modes) + 1);
  std::vector<double> b(static_cast<std::size_t>(modes) + 1);
  double weight = 0.0;
  for (int k = 0; k <= modes; ++k) {
    a[static_cast<std::size_t>(k)] = uniform(rng, -1.0, 1.0);
    b[static_cast<std::size_t>(k)] = k == 0 ? 0.0 : uniform(rng, -1.0, 1.0);
    weight += std::abs(a[static_cast<std::size_t>(k)]) + std::abs(b[static_cast<std::size_t>(k)]);
  }
  const double scale = weight > 0.0 ? amplitude / weight : 0.0;
  return GridFunction::sampled(n, [&](double xi) {
    double s = 0.0;
    for (int k = 0; k <= modes; ++k) {
      const double w = 2.0 * std::numbers::pi * k * xi;
      s += a[static_cast<std::size_t>(k)] * std::cos(w) +
           b[static_cast<std::size_t>(k)] * std::sin(w);
    }
    return scale * s;
  });
}

GridFunction scaled_to_l2(const GridFunction& g, double target) {
  const double n = g.norm_l2();
  if (n == 0.0) return g;
  return (target / n) * g;
}

}  // namespace satlab
