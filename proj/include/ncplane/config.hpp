#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ncplane/classical.hpp"
#include "ncplane/cstates.hpp"
#include "ncplane/params.hpp"

namespace ncplane::config {

// A grid given as "a:b:step" (inclusive of b up to rounding), a comma list
// "x,y,z", or a single number.
struct Range {
  std::vector<double> values;

  static Range parse(const std::string& text);
  static Range single(double v) { return Range{{v}}; }
};

enum class Units { Natural, LambdaCs, Explicit };

enum class Experiment {
  ClassicalTraj,
  Spectrum,
  MmEvolve,
  LambdaError,
  LambdaPhase,
  LambdaRadius,
  QuantizeVerify,
  WeightMoments,
};

std::optional<Experiment> parse_experiment(const std::string& name);
std::string experiment_name(Experiment e);
const std::vector<std::string>& experiment_names();

inline constexpr int kMaxTruncation = 256;

// Keys (all optional):
//   units        natural | lambda_cs | explicit           (natural)
//   hbar mass charge c                                      (explicit only)
//   B theta                                                 (B not with lambda_cs)
//   lambda l fig2_lambdas                                   ranges
//   N seed n_max r_samples
//   t_min t_max t_samples
//   gauge        landau | symmetric | landau_alt          (symmetric)
//   coordinates  noncommutative | commuting               (noncommutative)
//   R phi q0_1 q0_2 k2 beta_re beta_im
//   zeta_re zeta_im zeta_abs
//   gap          generalized | constant                   (generalized)
//   tolerance
//   out
struct ExperimentConfig {
  Experiment experiment = Experiment::LambdaError;
  Units units = Units::Natural;
  PhysicalParams phys = PhysicalParams::natural_units(1.0, 0.0);
  std::filesystem::path out_dir = "out";

  std::optional<Range> lambda;
  std::optional<Range> l;
  std::optional<Range> fig2_lambdas;
  std::optional<int> N;
  unsigned long long seed = 20240601ULL;
  int n_max = 10;
  int r_samples = 20000;

  double t_min = 0.0;
  std::optional<double> t_max;
  int t_samples = 2001;

  Gauge gauge = Gauge::Symmetric;
  classical::Coordinates coordinates = classical::Coordinates::Noncommutative;
  double R = 1.0;
  double phi = 0.0;
  double q0_1 = 0.0, q0_2 = 0.0;
  double k2 = 0.0;
  double beta_re = 0.0, beta_im = 0.0;

  double zeta_re = 1.0, zeta_im = 0.0;
  double zeta_abs = 1.0;
  cstates::GapConvention gap = cstates::GapConvention::GeneralizedFactorial;
  double tolerance = 1e-8;
};

// key -> value pairs of a flat file: `key = value`, '#' starts a comment.
// Throws InvalidConfig on malformed lines or repeated keys.
std::map<std::string, std::string> parse_key_values(const std::string& text);

// Applies key/value pairs on top of `base` and rebuilds the physical
// parameters from the units mode. Unknown keys are InvalidConfig.
ExperimentConfig apply(ExperimentConfig base, const std::map<std::string, std::string>& kv);

// Reads the file (MissingInput if absent) and applies it.
ExperimentConfig load(const std::filesystem::path& path, ExperimentConfig base = {});

// Grid and truncation invariants: non-empty grids, positive steps, N <= 256.
void validate(const ExperimentConfig& cfg);

}  // namespace ncplane::config
