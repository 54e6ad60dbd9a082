#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

// Experiment runner behind the command-line tool: parses a JSON config,
// dispatches to the named experiment, and emits machine-readable results.
//
// Exit-code contract:
//   0  experiment ran and its checks passed (for the falsification
//      experiments: the expected witnesses were found and confirmed)
//   1  a check was violated / falsification did not succeed
//   2  config error (parse failure, unknown experiment, bad field)
//   3  numeric failure (blow-up guard, non-contractive iteration)

namespace satlab {

inline constexpr const char* code_version = "satlab 0.1.0";
inline constexpr int schema_version = 1;

enum ExitCode : int {
  exit_pass = 0,
  exit_falsified = 1,
  exit_config_error = 2,
  exit_numeric_failure = 3,
};

struct RunOptions {
  std::string out_dir = ".";
  std::string format = "json";  // json | csv | gnuplot-dat
  bool force_strict_alignment = false;
  std::optional<std::uint64_t> seed_override;
  int threads = 0;
};

/// Runs the experiment described by a parsed config. When `result_out` is
/// non-null the full result record is copied there (used by tests).
/// Writes result.json (always) plus result.csv / result.dat depending on
/// the requested format into opt.out_dir.
int run_experiment_json(const nlohmann::ordered_json& config, const RunOptions& opt,
                        nlohmann::ordered_json* result_out = nullptr);

/// Reads, parses and validates the config file, then runs it. Parse errors
/// are reported with line/column anchors on stderr and yield exit code 2.
int run_experiment_file(const std::string& config_path, const RunOptions& opt);

/// FNV-1a 64-bit hash of the canonical config dump; recorded in results for
/// provenance.
std::string config_hash(const nlohmann::ordered_json& config);

}  // namespace satlab
