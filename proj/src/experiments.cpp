#include "satlab/experiments.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "satlab/lyapunov.hpp"
#include "satlab/oracles.hpp"
#include "satlab/stability.hpp"

namespace satlab {

namespace {

using json = nlohmann::ordered_json;

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const json& require_field(const json& j, const std::string& key) {
  if (!j.contains(key)) throw config_error("missing required field \"" + key + "\"");
  return j.at(key);
}

double require_number(const json& j, const std::string& key) {
  const json& v = require_field(j, key);
  if (!v.is_number()) throw config_error("field \"" + key + "\" must be a number");
  return v.get<double>();
}

double number_or(const json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw config_error("field \"" + key + "\" must be a number");
  return j.at(key).get<double>();
}

long integer_or(const json& j, const std::string& key, long fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer()) throw config_error("field \"" + key + "\" must be an integer");
  return j.at(key).get<long>();
}

std::string string_or(const json& j, const std::string& key, const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_string()) throw config_error("field \"" + key + "\" must be a string");
  return j.at(key).get<std::string>();
}

std::vector<double> number_list(const json& j, const std::string& key) {
  const json& v = require_field(j, key);
  if (!v.is_array() || v.empty()) throw config_error("field \"" + key + "\" must be a non-empty array");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw config_error("field \"" + key + "\" must contain numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

FeedbackMap parse_sigma(const json& sys) {
  const std::string kind = string_or(sys, "sigma", "sat");
  if (kind == "identity") return FeedbackMap::identity();
  if (kind == "sat") return FeedbackMap::sat();
  if (kind == "deadzone_linear") return FeedbackMap::deadzone_linear(number_or(sys, "delta", 1.0));
  if (kind == "tabulated") {
    const json& table = require_field(sys, "table");
    std::vector<std::pair<double, double>> knots;
    for (const auto& row : table) {
      if (!row.is_array() || row.size() != 2) throw config_error("\"table\" rows must be [z, value]");
      knots.emplace_back(row[0].get<double>(), row[1].get<double>());
    }
    return FeedbackMap::tabulated(std::move(knots));
  }
  throw config_error("unknown sigma kind \"" + kind + "\"");
}

SystemSpec parse_system(const json& cfg) {
  const json& sys = require_field(cfg, "system");
  SystemSpec spec;
  const std::string gen = string_or(sys, "generator", "zero");
  if (gen == "zero") {
    spec.generator = GeneratorSpec::zero();
  } else if (gen == "periodic_shift") {
    spec.generator = GeneratorSpec::periodic_shift();
  } else if (gen == "scalar_diagonal") {
    spec.generator = GeneratorSpec::scalar_diagonal(require_number(sys, "alpha"));
  } else if (gen == "matrix") {
    const json& m = require_field(sys, "matrix");
    const auto rows = m.size();
    Eigen::MatrixXd mat(rows, rows);
    for (std::size_t i = 0; i < rows; ++i) {
      if (!m[i].is_array() || m[i].size() != rows) throw config_error("\"matrix\" must be square");
      for (std::size_t j = 0; j < rows; ++j) mat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m[i][j].get<double>();
    }
    spec.generator = GeneratorSpec::matrix(std::move(mat));
  } else {
    throw config_error("unknown generator kind \"" + gen + "\"");
  }
  spec.input = InputOp::scaled(number_or(sys, "b", 1.0));
  spec.sigma = parse_sigma(sys);
  return spec;
}

std::size_t parse_cells(const json& cfg, std::size_t fallback) {
  if (!cfg.contains("grid")) return fallback;
  return static_cast<std::size_t>(integer_or(cfg.at("grid"), "cells", static_cast<long>(fallback)));
}

GridFunction parse_initial(const json& cfg, std::size_t n, Rng& rng) {
  if (!cfg.contains("initial")) return GridFunction(n, 1.0);
  const json& init = cfg.at("initial");
  const std::string kind = string_or(init, "kind", "constant");
  if (kind == "constant") return GridFunction(n, number_or(init, "value", 1.0));
  if (kind == "smooth") return smooth_profile(rng, n, number_or(init, "amplitude", 1.0));
  if (kind == "rough") return rough_profile(rng, n, number_or(init, "amplitude", 1.0));
  if (kind == "family") return oracles::counterexample_profile(integer_or(init, "n", 2), n);
  throw config_error("unknown initial kind \"" + kind + "\"");
}

IntegrateOptions parse_integrate(const json& cfg, const RunOptions& run) {
  IntegrateOptions opt;
  const bool allow_interp =
      cfg.contains("allow_interpolated_shift") && cfg.at("allow_interpolated_shift").get<bool>();
  opt.shift_mode =
      (allow_interp && !run.force_strict_alignment) ? ShiftMode::Interpolate : ShiftMode::Strict;
  const std::string substep = string_or(cfg, "substep", "auto");
  if (substep == "rk4") opt.substep = Substep::Rk4;
  else if (substep == "exact") opt.substep = Substep::ExactSat;
  else if (substep != "auto") throw config_error("substep must be auto|rk4|exact");
  return opt;
}

std::uint64_t parse_seed(const json& cfg, const RunOptions& run) {
  if (run.seed_override.has_value()) return *run.seed_override;
  return static_cast<std::uint64_t>(integer_or(cfg, "seed", 12345));
}

std::vector<long> ladder_from(const json& cfg) {
  const int max_exp = static_cast<int>(integer_or(cfg, "ladder_max_exp", 20));
  if (max_exp < 1 || max_exp > 62) throw config_error("ladder_max_exp must be in [1, 62]");
  return default_witness_ladder(max_exp);
}

// ---------------------------------------------------------------------------
// Individual experiments. Each returns the exit code and fills rows/summary.

int run_simulate(const json& cfg, const RunOptions& run, json& rows, json& summary) {
  Rng rng(parse_seed(cfg, run));
  const SystemSpec sys = parse_system(cfg);
  const std::size_t n = parse_cells(cfg, 256);
  const json& time = require_field(cfg, "time");
  const double dt = require_number(time, "dt");
  const double t_end = require_number(time, "t_end");
  const GridFunction x0 = parse_initial(cfg, n, rng);

  Disturbance<GridFunction> d;
  if (cfg.contains("disturbance")) {
    const double amp = require_number(cfg.at("disturbance"), "amplitude");
    if (amp != 0.0) d = Disturbance<GridFunction>::constant(GridFunction(n, amp));
  }
  const auto traj = solve_mild(sys, x0, d, t_end, dt, parse_integrate(cfg, run));
  const long stride = std::max(1L, integer_or(cfg, "output_stride", 1));
  for (std::size_t i = 0; i < traj.size(); i += static_cast<std::size_t>(stride)) {
    rows.push_back({{"t_s", traj.times[i]},
                    {"norm_l2", traj.states[i].norm_l2()},
                    {"norm_linf", traj.states[i].norm_linf()}});
  }
  summary["verdict"] = "pass";
  summary["scheme"] = traj.scheme;
  summary["final_norm_l2"] = traj.back().norm_l2();
  return exit_pass;
}

int run_counterexample(const json& cfg, const RunOptions&, json& rows, json& summary) {
  const std::vector<double> t_grid =
      cfg.contains("t_grid") ? number_list(cfg, "t_grid") : std::vector<double>{require_number(cfg, "t")};
  const double threshold = number_or(cfg, "threshold", 0.5);
  const std::vector<long> ladder = ladder_from(cfg);
  bool all_confirmed = true;
  for (double t : t_grid) {
    const auto search = oracles::find_witness_n(t, threshold, ladder);
    json row{{"t_s", t}, {"threshold", threshold}};
    if (search.n.has_value()) {
      const double quad = oracles::counterexample_norm(*search.n, t);
      const bool confirmed = quad > threshold;
      row["witness_n"] = *search.n;
      row["bound"] = search.bound;
      row["quad_norm"] = quad;
      row["confirmed"] = confirmed;
      all_confirmed = all_confirmed && confirmed;
    } else {
      row["witness_n"] = 0;
      row["bound"] = search.bound;
      row["quad_norm"] = 0.0;
      row["confirmed"] = false;
      all_confirmed = false;
    }
    rows.push_back(std::move(row));
  }
  summary["verdict"] = all_confirmed ? "pass" : "fail";
  return all_confirmed ? exit_pass : exit_falsified;
}

int run_transport_equality(const json& cfg, const RunOptions& run, json& rows, json& summary) {
  Rng rng(parse_seed(cfg, run));
  const std::size_t n = parse_cells(cfg, 400);
  const GridFunction f = parse_initial(cfg, n, rng);
  const std::vector<double> t_grid = number_list(cfg, "t_grid");
  const double tol = number_or(cfg, "tolerance", 1e-12);
  double worst = 0.0;
  for (double t : t_grid) {
    const double nx = oracles::exact_sat_ode_solution(f, t).norm_l2();
    const double ny = oracles::exact_sat_transport_solution(f, t).norm_l2();
    const double diff = std::abs(nx - ny);
    worst = std::max(worst, diff);
    rows.push_back({{"t_s", t}, {"norm_ode", nx}, {"norm_transport", ny}, {"abs_diff", diff}});
  }
  summary["max_abs_diff"] = worst;
  summary["tolerance"] = tol;
  summary["verdict"] = worst <= tol ? "pass" : "fail";
  return worst <= tol ? exit_pass : exit_falsified;
}

int run_lyapunov_check(const json& cfg, const RunOptions& run, json& rows, json& summary) {
  const SystemSpec sys = parse_system(cfg);
  if (sys.generator.kind != GeneratorSpec::Kind::ScalarDiagonal || !(sys.generator.decay > 0.0)) {
    throw config_error("lyapunov-check expects a scalar_diagonal generator with alpha > 0");
  }
  const double alpha = sys.generator.decay;
  const double eps = number_or(cfg, "epsilon", alpha);
  const double k_r = number_or(cfg, "k_r", 1.0);
  const int samples = static_cast<int>(integer_or(cfg, "samples", 50));
  const std::size_t n = parse_cells(cfg, 64);
  const double x0_max = number_or(cfg, "x0_norm_max", 5.0);
  const double d_max = number_or(cfg, "d_norm_max", 1.0);
  Rng rng(parse_seed(cfg, run));

  std::vector<std::pair<GridFunction, Disturbance<GridFunction>>> pairs;
  pairs.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    GridFunction x0 = scaled_to_l2(rough_profile(rng, n, 1.0), x0_max * canonical(rng));
    GridFunction dval = scaled_to_l2(rough_profile(rng, n, 1.0), d_max * canonical(rng));
    pairs.emplace_back(std::move(x0), Disturbance<GridFunction>::constant(std::move(dval)));
  }
  const auto rep = check_dissipation_chain<GridFunction>(
      sys, alpha, k_r, pairs, eps, number_or(cfg, "margin_tolerance", 1e-2),
      parse_integrate(cfg, run));
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& r = rep.rows[i];
    rows.push_back({{"sample", static_cast<long>(i)},
                    {"dini", r.dini},
                    {"bound", r.bound},
                    {"margin", r.margin},
                    {"pass", r.pass}});
  }
  summary["worst_margin"] = rep.worst_margin;
  summary["verdict"] = rep.pass ? "pass" : "fail";
  return rep.pass ? exit_pass : exit_falsified;
}

int run_iss_check(const json& cfg, const RunOptions& run, json& rows, json& summary) {
  const SystemSpec sys = parse_system(cfg);
  if (sys.generator.kind != GeneratorSpec::Kind::ScalarDiagonal || !(sys.generator.decay > 0.0)) {
    throw config_error("iss-check expects a scalar_diagonal generator with alpha > 0");
  }
  const double alpha = sys.generator.decay;
  const double eps = number_or(cfg, "epsilon", alpha);
  const double k_r = number_or(cfg, "k_r", 1.0);
  const int samples = static_cast<int>(integer_or(cfg, "samples", 25));
  const std::size_t n = parse_cells(cfg, 64);
  const json& time = require_field(cfg, "time");
  const double dt = require_number(time, "dt");
  const double t_end = require_number(time, "t_end");
  Rng rng(parse_seed(cfg, run));
  const IntegrateOptions iopt = parse_integrate(cfg, run);

  bool all_pass = true;
  double worst_ratio = 0.0;
  for (int i = 0; i < samples; ++i) {
    GridFunction x0 = scaled_to_l2(rough_profile(rng, n, 1.0),
                                   number_or(cfg, "x0_norm_max", 5.0) * canonical(rng));
    GridFunction dval = scaled_to_l2(rough_profile(rng, n, 1.0),
                                     number_or(cfg, "d_norm_max", 1.0) * canonical(rng));
    const auto d = Disturbance<GridFunction>::constant(std::move(dval));
    const auto traj = solve_mild(sys, x0, d, t_end, dt, iopt);
    const auto rep = check_iss_estimate(traj, d, alpha, eps, k_r, sys.input.operator_norm());
    all_pass = all_pass && rep.pass;
    worst_ratio = std::max(worst_ratio, rep.worst_ratio);
    rows.push_back({{"sample", static_cast<long>(i)},
                    {"worst_ratio", rep.worst_ratio},
                    {"pass", rep.pass}});
  }
  summary["worst_ratio"] = worst_ratio;
  summary["verdict"] = all_pass ? "pass" : "fail";
  return all_pass ? exit_pass : exit_falsified;
}

int run_gronwall_check(const json& cfg, const RunOptions& run, json& rows, json& summary) {
  const SystemSpec sys = parse_system(cfg);
  const std::size_t n = parse_cells(cfg, 128);
  const json& time = require_field(cfg, "time");
  const double dt = require_number(time, "dt");
  const double t_end = require_number(time, "t_end");
  const double k_r = number_or(cfg, "k_r", 1.0);
  const int pair_count = static_cast<int>(integer_or(cfg, "pairs", 20));
  Rng rng(parse_seed(cfg, run));
  const IntegrateOptions iopt = parse_integrate(cfg, run);
  const double norm_b = sys.input.operator_norm();

  bool all_pass = true;
  for (int i = 0; i < pair_count; ++i) {
    const GridFunction x0 = scaled_to_l2(rough_profile(rng, n, 1.0), uniform(rng, 0.2, 3.0));
    const GridFunction y0 = x0 + scaled_to_l2(rough_profile(rng, n, 1.0), uniform(rng, 0.0, 0.5));
    Disturbance<GridFunction> d, d_tilde;
    if (canonical(rng) > 0.3) {
      d = Disturbance<GridFunction>::constant(GridFunction(n, uniform(rng, -0.5, 0.5)));
      d_tilde = Disturbance<GridFunction>::constant(GridFunction(n, uniform(rng, -0.5, 0.5)));
    }
    const auto tx = solve_mild(sys, x0, d, t_end, dt, iopt);
    const auto ty = solve_mild(sys, y0, d_tilde, t_end, dt, iopt);
    const auto rep = gronwall_check(tx, ty, d, d_tilde, k_r, norm_b);
    all_pass = all_pass && rep.pass;
    rows.push_back({{"pair", static_cast<long>(i)},
                    {"worst_margin", rep.worst_margin},
                    {"max_sigma_arg_norm", rep.max_sigma_arg_norm},
                    {"pass", rep.pass}});
  }
  summary["verdict"] = all_pass ? "pass" : "fail";
  return all_pass ? exit_pass : exit_falsified;
}

int run_ugas_falsify(const json& cfg, const RunOptions&, json& rows, json& summary) {
  const SystemSpec sys = parse_system(cfg);
  const std::vector<double> t_grid = number_list(cfg, "t_grid");
  FalsifyOptions opt;
  opt.threshold = number_or(cfg, "threshold", 0.5);
  opt.ladder = ladder_from(cfg);
  const auto rep = falsify_ugas(sys, t_grid, opt);
  for (std::size_t i = 0; i < rep.witnesses.size(); ++i) {
    const auto& w = rep.witnesses[i];
    rows.push_back({{"t_s", w.t},
                    {"witness_n", w.n},
                    {"bound", w.bound},
                    {"quad_norm", w.quad_norm},
                    {"envelope", rep.envelope[i]},
                    {"confirmed", w.confirmed}});
  }
  summary["threshold"] = rep.threshold;
  summary["falsified"] = rep.falsified;
  summary["verdict"] = rep.falsified ? "pass" : "fail";
  return rep.falsified ? exit_pass : exit_falsified;
}

int run_semiglobal_fit(const json& cfg, const RunOptions& run, json& rows, json& summary) {
  const SystemSpec sys = parse_system(cfg);
  const std::size_t n = parse_cells(cfg, 256);
  const json& time = require_field(cfg, "time");
  const double dt = require_number(time, "dt");
  const double t_end = require_number(time, "t_end");
  const std::vector<double> radii = number_list(cfg, "radii");
  const int per_radius = static_cast<int>(integer_or(cfg, "samples_per_radius", 8));
  const double mu_floor = number_or(cfg, "mu_floor", 1e-3);

  const auto sampler = make_da_ball_sampler(sys.generator, n);
  const auto rep = fit_semiglobal(sys, radii, per_radius, t_end, dt, sampler,
                                  parse_seed(cfg, run), mu_floor, parse_integrate(cfg, run));
  for (const auto& r : rep.rows) {
    rows.push_back({{"radius", r.radius},
                    {"k_fit", r.k_fit},
                    {"mu_fit", r.mu_fit},
                    {"samples", r.samples}});
  }
  summary["all_rates_positive"] = rep.all_rates_positive;
  summary["verdict"] = rep.all_rates_positive ? "pass" : "fail";
  return rep.all_rates_positive ? exit_pass : exit_falsified;
}

int run_property_suite(const json& cfg, const RunOptions& run, json& rows, json& summary) {
  const int samples = static_cast<int>(integer_or(cfg, "samples", 500));
  const std::size_t n = parse_cells(cfg, 256);
  const double amplitude = number_or(cfg, "amplitude", 10.0);
  Rng rng(parse_seed(cfg, run));
  const FeedbackMap sigma = FeedbackMap::sat();
  bool all_pass = true;

  auto push = [&](const std::string& name, double value, bool pass) {
    rows.push_back({{"check", name}, {"value", value}, {"pass", pass}});
    all_pass = all_pass && pass;
  };

  int iv_failures = 0;
  double contraction_worst = 0.0;
  std::vector<std::pair<GridFunction, GridFunction>> pairs;
  for (int i = 0; i < samples; ++i) {
    const GridFunction u = i % 2 == 0 ? rough_profile(rng, n, amplitude)
                                      : smooth_profile(rng, n, amplitude);
    if (!check_property_iv(sigma, u).pass) ++iv_failures;
    const GridFunction su = apply(sigma, u);
    contraction_worst = std::max(
        {contraction_worst, su.norm_l1() - u.norm_l1(), su.norm_l2() - u.norm_l2(),
         su.norm_linf() - u.norm_linf()});
    pairs.emplace_back(rough_profile(rng, n, amplitude), smooth_profile(rng, n, amplitude));
  }
  push("property_iv_failures", iv_failures, iv_failures == 0);
  push("norm_contraction_excess", contraction_worst, contraction_worst <= 1e-12);

  const auto mono = check_monotone(sigma, pairs);
  push("monotone_min_pairing", mono.min_pairing, mono.pass);

  const auto lip = estimate_local_lipschitz(sigma, 2.0, 400, parse_seed(cfg, run) + 1, n);
  push("lipschitz_estimate", lip.estimate, lip.estimate <= 1.0 + 1e-9);

  double idem_worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double z = uniform(rng, -3.0, 3.0);
    idem_worst = std::max(idem_worst, std::abs(sat_scalar(sat_scalar(z)) - sat_scalar(z)));
  }
  push("sat_idempotence_gap", idem_worst, idem_worst == 0.0);

  summary["verdict"] = all_pass ? "pass" : "fail";
  return all_pass ? exit_pass : exit_falsified;
}

// ---------------------------------------------------------------------------

void write_csv(const json& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot write " + path);
  if (rows.empty()) return;
  std::vector<std::string> columns;
  for (auto it = rows.front().begin(); it != rows.front().end(); ++it) columns.push_back(it.key());
  for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      out << (c ? "," : "");
      const json& cell = row.at(columns[c]);
      if (cell.is_string()) out << cell.get<std::string>();
      else out << cell.dump();
    }
    out << "\n";
  }
}

void write_gnuplot(const json& rows, const std::string& experiment, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot write " + path);
  out << "# satlab " << experiment << "\n";
  if (rows.empty()) return;
  out << "#";
  for (auto it = rows.front().begin(); it != rows.front().end(); ++it) out << " " << it.key();
  out << "\n";
  long index = 0;
  for (const auto& row : rows) {
    bool first = true;
    for (auto it = row.begin(); it != row.end(); ++it) {
      if (!first) out << " ";
      first = false;
      const json& cell = it.value();
      if (cell.is_boolean()) out << (cell.get<bool>() ? 1 : 0);
      else if (cell.is_number()) out << cell.dump();
      else out << index;  // string cells become the row index
    }
    out << "\n";
    ++index;
  }
}

int dispatch(const std::string& name, const json& cfg, const RunOptions& run, json& rows,
             json& summary) {
  if (name == "simulate") return run_simulate(cfg, run, rows, summary);
  if (name == "counterexample") return run_counterexample(cfg, run, rows, summary);
  if (name == "transport-equality") return run_transport_equality(cfg, run, rows, summary);
  if (name == "lyapunov-check") return run_lyapunov_check(cfg, run, rows, summary);
  if (name == "iss-check") return run_iss_check(cfg, run, rows, summary);
  if (name == "gronwall-check") return run_gronwall_check(cfg, run, rows, summary);
  if (name == "ugas-falsify") return run_ugas_falsify(cfg, run, rows, summary);
  if (name == "semiglobal-fit") return run_semiglobal_fit(cfg, run, rows, summary);
  if (name == "property-suite") return run_property_suite(cfg, run, rows, summary);
  throw config_error("unknown experiment \"" + name + "\"");
}

std::pair<int, int> line_column_of(const std::string& text, std::size_t byte) {
  int line = 1;
  int col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

std::string config_hash(const nlohmann::ordered_json& config) {
  const std::string dump = config.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

int run_experiment_json(const nlohmann::ordered_json& config, const RunOptions& opt,
                        nlohmann::ordered_json* result_out) {
  const auto t0 = std::chrono::steady_clock::now();
#ifdef _OPENMP
  if (opt.threads > 0) omp_set_num_threads(opt.threads);
#endif
  json result;
  result["schema_version"] = schema_version;
  result["code_version"] = code_version;

  int code = exit_pass;
  try {
    if (!config.is_object()) throw config_error("config must be a JSON object");
    const std::string name = string_or(config, "experiment", "");
    if (name.empty()) throw config_error("missing required field \"experiment\"");
    result["experiment"] = name;
    result["config"] = config;
    result["config_hash"] = config_hash(config);
    json rows = json::array();
    json summary = json::object();
    code = dispatch(name, config, opt, rows, summary);
    result["rows"] = std::move(rows);
    result["summary"] = std::move(summary);
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config_error;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config_error;
  } catch (const numeric_failure& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return exit_numeric_failure;
  }

  const auto t1 = std::chrono::steady_clock::now();
  result["wall_time_s"] = std::chrono::duration<double>(t1 - t0).count();

  try {
    namespace fs = std::filesystem;
    fs::create_directories(opt.out_dir);
    const std::string base = (fs::path(opt.out_dir) / "result").string();
    {
      std::ofstream out(base + ".json");
      if (!out) throw config_error("cannot write " + base + ".json");
      out << result.dump(2) << "\n";
    }
    if (opt.format == "csv") write_csv(result["rows"], base + ".csv");
    else if (opt.format == "gnuplot-dat") write_gnuplot(result["rows"], result["experiment"], base + ".dat");
    else if (opt.format != "json") throw config_error("unknown format \"" + opt.format + "\"");
  } catch (const config_error& e) {
    std::cerr << "output error: " << e.what() << "\n";
    return exit_config_error;
  }

  if (result_out != nullptr) *result_out = result;
  return code;
}

int run_experiment_file(const std::string& config_path, const RunOptions& opt) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "config error: cannot open " << config_path << "\n";
    return exit_config_error;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  nlohmann::ordered_json config;
  try {
    config = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = line_column_of(text, e.byte > 0 ? e.byte - 1 : 0);
    std::cerr << "config error: " << config_path << ":" << line << ":" << col << ": " << e.what()
              << "\n";
    return exit_config_error;
  }
  return run_experiment_json(config, opt);
}

}  // namespace satlab
