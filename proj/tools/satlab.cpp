#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "satlab/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"satlab: numerical experiments on collocated systems with saturated feedback"};
  app.set_version_flag("--version", std::string(satlab::code_version));

  auto* run = app.add_subcommand("run", "run an experiment described by a JSON config");
  std::string config_path;
  satlab::RunOptions opt;
  std::uint64_t seed = 0;
  bool seed_given = false;
  run->add_option("config", config_path, "path to the experiment config")->required();
  run->add_option("--out", opt.out_dir, "output directory (default: current directory)");
  run->add_option("--format", opt.format, "result format: json | csv | gnuplot-dat")
      ->check(CLI::IsMember({"json", "csv", "gnuplot-dat"}));
  run->add_flag("--strict-alignment", opt.force_strict_alignment,
                "reject non-grid-aligned shifts even if the config allows interpolation");
  run->add_option("--seed", seed, "override the config seed")->trigger_on_parse()
      ->each([&](const std::string&) { seed_given = true; });
  run->add_option("--threads", opt.threads, "OpenMP thread count (0 = runtime default)");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    if (seed_given) opt.seed_override = seed;
    return satlab::run_experiment_file(config_path, opt);
  }
  std::cout << app.help() << std::endl;
  return 0;
}
