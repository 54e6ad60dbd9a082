#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "satlab/oracles.hpp"
#include "satlab/rng.hpp"
#include "satlab/systems.hpp"

// Empirical stability classification: GAS checks, UGAS falsification through
// the singular profile family, semi-global decay-rate fitting and ISS gain
// sweeps. Verdicts are evidence, not proofs; every report carries the
// numbers that produced it.

namespace satlab {

struct GasSeries {
  std::vector<double> times;
  std::vector<double> norms;
  bool monotone = true;
  double final_norm = 0.0;
  bool pass = true;
};

struct GasReport {
  std::vector<GasSeries> series;
  bool pass = true;
};

struct GasOptions {
  int checkpoints = 10;        // geometric time grid up to t_end
  double monotone_tol = 1e-9;  // relative slack on the decay check
  double dt = 1e-2;            // integrator step for the generic path
  IntegrateOptions integrate;
};

/// Pass means every tested trajectory has nonincreasing norm and final norm
/// at most tol (d = 0 throughout). Systems with an exact pointwise solution
/// (A in {0, periodic shift}, B = I, sigma = sat) are evaluated through the
/// closed form; everything else is integrated.
GasReport classify_gas(const SystemSpec& sys, const std::vector<GridFunction>& x0_list,
                       double t_end, double tol, const GasOptions& opt = {});

struct UgasWitness {
  double t = 0.0;
  bool found = false;
  long n = 0;
  double bound = 0.0;      // closed-form lower bound for |x_n(t)|^2
  double quad_norm = 0.0;  // quadrature-confirmed |x_n(t)|
  bool confirmed = false;
};

struct UgasReport {
  std::vector<UgasWitness> witnesses;
  std::vector<double> envelope;  // per t: max family norm over the ladder
  double threshold = 0.5;
  bool falsified = false;  // witness found and confirmed at every t
};

std::vector<long> default_witness_ladder(int max_exp = 20);

struct FalsifyOptions {
  double threshold = 0.5;
  std::vector<long> ladder = default_witness_ladder();
  double quad_rel_tol = 1e-9;
};

/// Searches the unit-norm family for members whose evolved norm exceeds the
/// threshold at each requested time: cheap closed-form screening first, then
/// quadrature confirmation of the selected witness. Supported systems are
/// the ones with an exact family evaluator (A in {0, periodic shift}, B = I,
/// sigma in {sat, identity}); the transport case has the same norms as the
/// pointwise case because the shift is an isometry.
UgasReport falsify_ugas(const SystemSpec& sys, std::span<const double> t_grid,
                        const FalsifyOptions& opt = {});

struct SemiglobalRow {
  double radius = 0.0;
  double k_fit = 1.0;   // worst overshoot across samples
  double mu_fit = 0.0;  // worst (smallest) fitted decay rate
  int samples = 0;
};

struct SemiglobalReport {
  std::vector<SemiglobalRow> rows;
  bool all_rates_positive = true;
};

/// Draws grid profiles with graph norm ||x|| + ||Ax|| equal to r.
/// PeriodicShift uses truncated Fourier sums, whose derivative norms are
/// exact in the coefficients; Zero scales arbitrary profiles (graph norm =
/// L2 norm).
using DaBallSampler = std::function<GridFunction(double, int, Rng&)>;
DaBallSampler make_da_ball_sampler(const GeneratorSpec& gen, std::size_t grid_n);

/// Per radius: least-squares fit of log |x(t)| against t for each sampled
/// initial state, reporting the worst-case (K, mu).
SemiglobalReport fit_semiglobal(const SystemSpec& sys, std::span<const double> r_list,
                                int samples_per_radius, double t_end, double dt,
                                const DaBallSampler& sampler, std::uint64_t seed,
                                double mu_floor = 1e-3, const IntegrateOptions& opt = {});

/// Same fit for an explicit list of profiles (used for the singular family).
SemiglobalRow fit_decay_profiles(const SystemSpec& sys, const std::vector<GridFunction>& profiles,
                                 double radius, double t_end, double dt,
                                 const IntegrateOptions& opt = {});

struct GainRow {
  double amplitude = 0.0;
  double sup_response = 0.0;  // sup_t |x(t)| from x0 = 0
};

/// Empirical ISS gain table: constant disturbances of growing amplitude,
/// zero initial state, supremum of the response norm over the horizon.
std::vector<GainRow> fit_iss_gain(const SystemSpec& sys, std::span<const double> amplitudes,
                                  std::size_t grid_n, double t_end, double dt,
                                  const IntegrateOptions& opt = {});

}  // namespace satlab
