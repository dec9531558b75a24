#include "ncplane/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "ncplane/error.hpp"

namespace ncplane::config {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::InvalidConfig, what); }

double to_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size() || !std::isfinite(v)) {
    invalid("'" + key + "' is not a finite number: '" + text + "'");
  }
  return v;
}

long long to_integer(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
    invalid("'" + key + "' is not an integer: '" + text + "'");
  }
  return v;
}

int to_int(const std::string& key, const std::string& text) {
  const long long v = to_integer(key, text);
  if (v < -2147483647LL || v > 2147483647LL) invalid("'" + key + "' out of range");
  return static_cast<int>(v);
}

}  // namespace

Range Range::parse(const std::string& raw) {
  const std::string text = trim(raw);
  if (text.empty()) invalid("empty range");
  Range r;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream ss(text);
    while (std::getline(ss, part, ':')) parts.push_back(part);
    if (parts.size() != 3) invalid("range must be a:b:step, got '" + text + "'");
    const double a = to_double("range start", parts[0]);
    const double b = to_double("range end", parts[1]);
    const double step = to_double("range step", parts[2]);
    if (!(step > 0.0)) invalid("range step must be positive in '" + text + "'");
    if (b < a) invalid("range end is below its start in '" + text + "'");
    const long long n = static_cast<long long>(std::floor((b - a) / step + 1e-9));
    if (n > 10'000'000) invalid("range '" + text + "' has too many points");
    for (long long k = 0; k <= n; ++k) r.values.push_back(a + double(k) * step);
  } else {
    std::string part;
    std::istringstream ss(text);
    while (std::getline(ss, part, ',')) r.values.push_back(to_double("range value", part));
  }
  if (r.values.empty()) invalid("range '" + text + "' is empty");
  return r;
}

namespace {

struct ExperimentEntry {
  Experiment id;
  const char* name;
};

constexpr ExperimentEntry kExperiments[] = {
    {Experiment::ClassicalTraj, "classical-traj"}, {Experiment::Spectrum, "spectrum"},
    {Experiment::MmEvolve, "mm-evolve"},           {Experiment::LambdaError, "lambda-error"},
    {Experiment::LambdaPhase, "lambda-phase"},     {Experiment::LambdaRadius, "lambda-radius"},
    {Experiment::QuantizeVerify, "quantize-verify"}, {Experiment::WeightMoments, "weight-moments"},
};

}  // namespace

std::optional<Experiment> parse_experiment(const std::string& name) {
  for (const auto& e : kExperiments) {
    if (name == e.name) return e.id;
  }
  return std::nullopt;
}

std::string experiment_name(Experiment id) {
  for (const auto& e : kExperiments) {
    if (e.id == id) return e.name;
  }
  return "unknown";
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& e : kExperiments) v.emplace_back(e.name);
    return v;
  }();
  return names;
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      invalid("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      invalid("line " + std::to_string(lineno) + ": empty key or value");
    }
    if (!kv.emplace(key, value).second) invalid("key '" + key + "' given twice");
  }
  return kv;
}

ExperimentConfig apply(ExperimentConfig cfg, const std::map<std::string, std::string>& kv) {
  static const std::set<std::string> explicit_only{"hbar", "mass", "charge", "c"};
  auto get = [&](const char* key) -> const std::string* {
    const auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  auto num = [&](const char* key, double& target) {
    if (auto v = get(key)) target = to_double(key, *v);
  };
  auto integer = [&](const char* key, int& target) {
    if (auto v = get(key)) target = to_int(key, *v);
  };

  static const std::set<std::string> known{
      "units", "hbar",    "mass",    "charge",  "c",         "B",           "theta",
      "lambda", "l",      "fig2_lambdas", "N",  "seed",      "n_max",       "r_samples",
      "t_min", "t_max",   "t_samples", "gauge", "coordinates", "R",         "phi",
      "q0_1",  "q0_2",    "k2",      "beta_re", "beta_im",   "zeta_re",     "zeta_im",
      "zeta_abs", "gap",  "tolerance", "out"};
  for (const auto& [k, v] : kv) {
    if (!known.count(k)) invalid("unknown key '" + k + "'");
  }

  if (auto v = get("units")) {
    if (*v == "natural") cfg.units = Units::Natural;
    else if (*v == "lambda_cs") cfg.units = Units::LambdaCs;
    else if (*v == "explicit") cfg.units = Units::Explicit;
    else invalid("units must be natural, lambda_cs or explicit");
  }
  for (const auto& k : explicit_only) {
    if (kv.count(k) && cfg.units != Units::Explicit) {
      invalid("'" + k + "' is only read with units = explicit");
    }
  }
  if (kv.count("B") && cfg.units == Units::LambdaCs) {
    invalid("B is fixed by units = lambda_cs");
  }

  PhysicalParams p = cfg.phys;
  num("B", p.B);
  num("theta", p.theta);
  num("hbar", p.hbar);
  num("mass", p.mass);
  num("charge", p.charge);
  num("c", p.c);
  switch (cfg.units) {
    case Units::Natural: p = PhysicalParams::natural_units(p.B, p.theta); break;
    case Units::LambdaCs: p = PhysicalParams::lambda_cs_units(p.theta); break;
    case Units::Explicit: break;
  }
  cfg.phys = p;

  if (auto v = get("lambda")) cfg.lambda = Range::parse(*v);
  if (auto v = get("l")) cfg.l = Range::parse(*v);
  if (auto v = get("fig2_lambdas")) cfg.fig2_lambdas = Range::parse(*v);
  if (auto v = get("N")) cfg.N = to_int("N", *v);
  if (auto v = get("seed")) {
    const long long s = to_integer("seed", *v);
    if (s < 0) invalid("seed must be >= 0");
    cfg.seed = static_cast<unsigned long long>(s);
  }
  integer("n_max", cfg.n_max);
  integer("r_samples", cfg.r_samples);
  integer("t_samples", cfg.t_samples);
  num("t_min", cfg.t_min);
  if (auto v = get("t_max")) cfg.t_max = to_double("t_max", *v);

  if (auto v = get("gauge")) {
    if (*v == "landau") cfg.gauge = Gauge::Landau;
    else if (*v == "symmetric") cfg.gauge = Gauge::Symmetric;
    else if (*v == "landau_alt") cfg.gauge = Gauge::LandauAlt;
    else invalid("gauge must be landau, symmetric or landau_alt");
  }
  if (auto v = get("coordinates")) {
    if (*v == "noncommutative") cfg.coordinates = classical::Coordinates::Noncommutative;
    else if (*v == "commuting") cfg.coordinates = classical::Coordinates::Commuting;
    else invalid("coordinates must be noncommutative or commuting");
  }
  num("R", cfg.R);
  num("phi", cfg.phi);
  num("q0_1", cfg.q0_1);
  num("q0_2", cfg.q0_2);
  num("k2", cfg.k2);
  num("beta_re", cfg.beta_re);
  num("beta_im", cfg.beta_im);
  num("zeta_re", cfg.zeta_re);
  num("zeta_im", cfg.zeta_im);
  num("zeta_abs", cfg.zeta_abs);
  if (auto v = get("gap")) {
    if (*v == "generalized") cfg.gap = cstates::GapConvention::GeneralizedFactorial;
    else if (*v == "constant") cfg.gap = cstates::GapConvention::ConstantGap;
    else invalid("gap must be generalized or constant");
  }
  num("tolerance", cfg.tolerance);
  if (auto v = get("out")) cfg.out_dir = *v;
  return cfg;
}

ExperimentConfig load(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::MissingInput, "config file not found: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return config::apply(std::move(base), parse_key_values(ss.str()));
}

void validate(const ExperimentConfig& cfg) {
  for (const auto* r : {&cfg.lambda, &cfg.l, &cfg.fig2_lambdas}) {
    if (*r && (*r)->values.empty()) invalid("empty grid");
  }
  if (cfg.N && (*cfg.N < 1 || *cfg.N > kMaxTruncation)) invalid("N must be in 1..256");
  if (cfg.n_max < 0 || cfg.n_max > 170) invalid("n_max must be in 0..170");
  if (cfg.r_samples < 1000) invalid("r_samples must be >= 1000");
  if (cfg.t_samples < 2) invalid("t_samples must be >= 2");
  if (cfg.t_max && !(*cfg.t_max > cfg.t_min)) invalid("t_max must exceed t_min");
  if (!(cfg.tolerance > 0.0)) invalid("tolerance must be positive");
  if (cfg.R < 0.0) invalid("R must be >= 0");
  if (cfg.zeta_abs < 0.0) invalid("zeta_abs must be >= 0");
}

}  // namespace ncplane::config
