#include "satlab/stability.hpp"

#include <cmath>
#include <numbers>

namespace satlab {

namespace {

bool has_exact_sat_oracle(const SystemSpec& sys) {
  const bool gen_ok = sys.generator.kind == GeneratorSpec::Kind::Zero ||
                      sys.generator.kind == GeneratorSpec::Kind::PeriodicShift;
  return gen_ok && sys.input.is_identity() && sys.sigma.kind() == FeedbackMap::Kind::Sat;
}

bool has_linear_oracle(const SystemSpec& sys) {
  const bool gen_ok = sys.generator.kind == GeneratorSpec::Kind::Zero ||
                      sys.generator.kind == GeneratorSpec::Kind::PeriodicShift;
  return gen_ok && sys.input.is_identity() && sys.sigma.kind() == FeedbackMap::Kind::Identity;
}

std::vector<double> geometric_checkpoints(double t_end, int count) {
  std::vector<double> ts{0.0};
  for (int k = count - 1; k >= 0; --k) {
    ts.push_back(t_end * std::ldexp(1.0, -k));
  }
  return ts;
}

struct LogFit {
  double intercept = 0.0;
  double slope = 0.0;
  bool valid = false;
};

LogFit fit_log_norms(std::span<const double> times, std::span<const double> norms) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(norms[i] > 1e-300)) continue;
    const double y = std::log(norms[i]);
    sx += times[i];
    sy += y;
    sxx += times[i] * times[i];
    sxy += times[i] * y;
    ++m;
  }
  LogFit fit;
  if (m < 2) return fit;
  const double det = m * sxx - sx * sx;
  if (det == 0.0) return fit;
  fit.slope = (m * sxy - sx * sy) / det;
  fit.intercept = (sy * sxx - sx * sxy) / det;
  fit.valid = true;
  return fit;
}

}  // namespace

GasReport classify_gas(const SystemSpec& sys, const std::vector<GridFunction>& x0_list,
                       double t_end, double tol, const GasOptions& opt) {
  GasReport rep;
  const std::vector<double> checkpoints = geometric_checkpoints(t_end, opt.checkpoints);
  const bool oracle = has_exact_sat_oracle(sys);

  for (const GridFunction& x0 : x0_list) {
    GasSeries series;
    if (oracle) {
      // The shift is an isometry, so the pointwise solution norms apply to
      // the transport case unchanged.
      for (double t : checkpoints) {
        series.times.push_back(t);
        series.norms.push_back(oracles::exact_sat_ode_solution(x0, t).norm_l2());
      }
    } else {
      Disturbance<GridFunction> d;
      const auto traj = solve_mild(sys, x0, d, t_end, opt.dt, opt.integrate);
      for (double t : checkpoints) {
        const auto it =
            std::lower_bound(traj.times.begin(), traj.times.end(), t - 1e-12);
        const std::size_t idx =
            std::min<std::size_t>(static_cast<std::size_t>(it - traj.times.begin()),
                                  traj.size() - 1);
        series.times.push_back(traj.times[idx]);
        series.norms.push_back(traj.states[idx].norm_l2());
      }
    }
    const double scale = std::max(series.norms.front(), 1.0);
    for (std::size_t i = 1; i < series.norms.size(); ++i) {
      if (series.norms[i] > series.norms[i - 1] + opt.monotone_tol * scale) {
        series.monotone = false;
      }
    }
    series.final_norm = series.norms.back();
    series.pass = series.monotone && series.final_norm <= tol;
    rep.pass = rep.pass && series.pass;
    rep.series.push_back(std::move(series));
  }
  return rep;
}

std::vector<long> default_witness_ladder(int max_exp) {
  std::vector<long> ladder;
  for (int e = 1; e <= max_exp; ++e) ladder.push_back(1L << e);
  return ladder;
}

UgasReport falsify_ugas(const SystemSpec& sys, std::span<const double> t_grid,
                        const FalsifyOptions& opt) {
  const bool sat_oracle = has_exact_sat_oracle(sys);
  const bool linear_oracle = has_linear_oracle(sys);
  if (!sat_oracle && !linear_oracle) {
    throw std::invalid_argument("falsify_ugas: no exact family evaluator for this system");
  }

  UgasReport rep;
  rep.threshold = opt.threshold;
  rep.falsified = true;
  for (double t : t_grid) {
    UgasWitness w;
    w.t = t;
    if (linear_oracle) {
      // Linear decay is uniform over the unit-norm family.
      const double norm = std::exp(-t);
      w.found = norm > opt.threshold;
      if (w.found) {
        w.n = opt.ladder.empty() ? 1 : opt.ladder.front();
        w.bound = norm * norm;
        w.quad_norm = norm;
        w.confirmed = true;
      }
      rep.envelope.push_back(norm);
    } else {
      const auto search = oracles::find_witness_n(t, opt.threshold, opt.ladder);
      double envelope = 0.0;
      for (long n : opt.ladder) {
        envelope = std::max(envelope, std::sqrt(oracles::norm_lower_bound(n, t)));
      }
      if (search.n.has_value()) {
        w.found = true;
        w.n = *search.n;
        w.bound = search.bound;
        w.quad_norm = oracles::counterexample_norm(w.n, t, opt.quad_rel_tol);
        w.confirmed = w.quad_norm > opt.threshold;
        envelope = std::max(envelope, w.quad_norm);
      }
      rep.envelope.push_back(envelope);
    }
    rep.falsified = rep.falsified && w.found && w.confirmed;
    rep.witnesses.push_back(w);
  }
  return rep;
}

DaBallSampler make_da_ball_sampler(const GeneratorSpec& gen, std::size_t grid_n) {
  using Kind = GeneratorSpec::Kind;
  if (gen.kind == Kind::Zero || gen.kind == Kind::ScalarDiagonal) {
    // ||Ax|| is 0 or |alpha| ||x||, so the graph norm is a fixed multiple of
    // the L2 norm.
    const double graph_factor = gen.kind == Kind::Zero ? 1.0 : 1.0 + std::abs(gen.decay);
    return [grid_n, graph_factor](double r, int, Rng& rng) {
      const double rho = 0.25 + 0.75 * canonical(rng);
      return scaled_to_l2(rough_profile(rng, grid_n, 1.0), r * rho / graph_factor);
    };
  }
  if (gen.kind == Kind::PeriodicShift) {
    return [grid_n](double r, int index, Rng& rng) {
      const int modes = 1 + index % 4;
      std::vector<double> ac(static_cast<std::size_t>(modes) + 1);
      std::vector<double> bc(static_cast<std::size_t>(modes) + 1);
      for (int k = 0; k <= modes; ++k) {
        ac[static_cast<std::size_t>(k)] = uniform(rng, -1.0, 1.0);
        bc[static_cast<std::size_t>(k)] = k == 0 ? 0.0 : uniform(rng, -1.0, 1.0);
      }
      // ||x||^2 = a0^2 + (1/2) sum (ak^2 + bk^2); ||x'||^2 gains (2 pi k)^2.
      double l2_sq = ac[0] * ac[0];
      double deriv_sq = 0.0;
      for (int k = 1; k <= modes; ++k) {
        const double mode_sq = ac[static_cast<std::size_t>(k)] * ac[static_cast<std::size_t>(k)] +
                               bc[static_cast<std::size_t>(k)] * bc[static_cast<std::size_t>(k)];
        l2_sq += 0.5 * mode_sq;
        deriv_sq += 0.5 * mode_sq * std::pow(2.0 * std::numbers::pi * k, 2);
      }
      const double graph = std::sqrt(l2_sq) + std::sqrt(deriv_sq);
      const double rho = 0.25 + 0.75 * canonical(rng);
      const double scale = graph > 0.0 ? r * rho / graph : 0.0;
      return GridFunction::sampled(grid_n, [&](double xi) {
        double s = 0.0;
        for (int k = 0; k <= modes; ++k) {
          const double w = 2.0 * std::numbers::pi * k * xi;
          s += ac[static_cast<std::size_t>(k)] * std::cos(w) +
               bc[static_cast<std::size_t>(k)] * std::sin(w);
        }
        return scale * s;
      });
    };
  }
  throw std::invalid_argument("make_da_ball_sampler: grid sampler needs A in {zero, shift}");
}

namespace {

SemiglobalRow fit_one_radius(const SystemSpec& sys, const std::vector<GridFunction>& profiles,
                             double radius, double t_end, double dt,
                             const IntegrateOptions& opt) {
  SemiglobalRow row;
  row.radius = radius;
  row.mu_fit = std::numeric_limits<double>::infinity();
  Disturbance<GridFunction> d;
  for (const GridFunction& x0 : profiles) {
    const double n0 = x0.norm_l2();
    if (n0 <= 0.0) continue;
    const auto traj = solve_mild(sys, x0, d, t_end, dt, opt);
    std::vector<double> norms(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) norms[i] = traj.states[i].norm_l2();
    const LogFit fit = fit_log_norms(traj.times, norms);
    if (!fit.valid) continue;
    row.mu_fit = std::min(row.mu_fit, -fit.slope);
    row.k_fit = std::max(row.k_fit, std::exp(fit.intercept) / n0);
    ++row.samples;
  }
  if (row.samples == 0) row.mu_fit = 0.0;
  return row;
}

}  // namespace

SemiglobalReport fit_semiglobal(const SystemSpec& sys, std::span<const double> r_list,
                                int samples_per_radius, double t_end, double dt,
                                const DaBallSampler& sampler, std::uint64_t seed, double mu_floor,
                                const IntegrateOptions& opt) {
  SemiglobalReport rep;
  Rng rng(seed);
  for (double r : r_list) {
    std::vector<GridFunction> profiles;
    profiles.reserve(static_cast<std::size_t>(samples_per_radius));
    for (int i = 0; i < samples_per_radius; ++i) profiles.push_back(sampler(r, i, rng));
    SemiglobalRow row = fit_one_radius(sys, profiles, r, t_end, dt, opt);
    rep.all_rates_positive = rep.all_rates_positive && row.mu_fit > mu_floor;
    rep.rows.push_back(row);
  }
  return rep;
}

SemiglobalRow fit_decay_profiles(const SystemSpec& sys, const std::vector<GridFunction>& profiles,
                                 double radius, double t_end, double dt,
                                 const IntegrateOptions& opt) {
  return fit_one_radius(sys, profiles, radius, t_end, dt, opt);
}

std::vector<GainRow> fit_iss_gain(const SystemSpec& sys, std::span<const double> amplitudes,
                                  std::size_t grid_n, double t_end, double dt,
                                  const IntegrateOptions& opt) {
  std::vector<GainRow> table;
  const GridFunction zero(grid_n);
  for (double amp : amplitudes) {
    GainRow row;
    row.amplitude = amp;
    if (amp != 0.0) {
      const Disturbance<GridFunction> d =
          Disturbance<GridFunction>::constant(GridFunction(grid_n, amp));
      const auto traj = solve_mild(sys, zero, d, t_end, dt, opt);
      for (const auto& s : traj.states) row.sup_response = std::max(row.sup_response, s.norm_l2());
    }
    table.push_back(row);
  }
  return table;
}

}  // namespace satlab
