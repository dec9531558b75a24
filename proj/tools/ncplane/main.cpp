#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>

#include "ncplane/config.hpp"
#include "ncplane/error.hpp"
#include "ncplane/experiments.hpp"

using namespace ncplane;

int main(int argc, char** argv) {
  CLI::App app{"Charged particle on the noncommutative plane: batch experiments"};
  app.set_help_flag("-h,--help", "Show help");

  std::string experiment;
  std::optional<std::string> config_path, out, lambda, l;
  std::optional<int> N;
  std::optional<long long> seed;

  std::string names;
  for (const auto& n : config::experiment_names()) names += (names.empty() ? "" : ", ") + n;
  app.add_option("experiment", experiment, "One of: " + names)->required();
  app.add_option("--config", config_path, "Flat key = value configuration file");
  app.add_option("--out", out, "Output directory (default ./out)");
  app.add_option("--lambda", lambda, "lambda grid a:b:step, list x,y or value");
  app.add_option("--l", l, "l grid a:b:step, list or value");
  app.add_option("--N", N, "Fock truncation per mode (<= 256)");
  app.add_option("--seed", seed, "Seed for randomized sweeps");

  auto fail = [&](ErrorKind kind, const std::string& msg) {
    std::cerr << experiments::error_record(experiment, kind, msg) << '\n';
    return experiments::exit_code(kind);
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(ErrorKind::InvalidConfig, e.what());
  }

  const auto id = config::parse_experiment(experiment);
  if (!id) return fail(ErrorKind::InvalidConfig, "unknown experiment '" + experiment + "'");

  config::ExperimentConfig cfg;
  try {
    if (config_path) cfg = config::load(*config_path);
    // Flags win over the file.
    cfg.experiment = *id;
    if (out) cfg.out_dir = *out;
    if (lambda) cfg.lambda = config::Range::parse(*lambda);
    if (l) cfg.l = config::Range::parse(*l);
    if (N) cfg.N = *N;
    if (seed) {
      if (*seed < 0) throw Error(ErrorKind::InvalidConfig, "seed must be >= 0");
      cfg.seed = static_cast<unsigned long long>(*seed);
    }
  } catch (const Error& e) {
    return fail(e.kind(), e.what());
  }
  return experiments::run_and_record(cfg, std::cout, std::cerr);
}
