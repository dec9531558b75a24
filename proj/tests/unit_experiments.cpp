#include <doctest.h>

#include <fstream>
#include <sstream>

#include "ncplane/experiments.hpp"
#include "ncplane/io.hpp"
#include "test_dirs.hpp"

using namespace ncplane;
using config::Experiment;
using config::ExperimentConfig;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

const experiments::Check* find_check(const experiments::Report& r, const std::string& name) {
  for (const auto& c : r.checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

ExperimentConfig small(Experiment e, const std::filesystem::path& out) {
  ExperimentConfig cfg;
  cfg.experiment = e;
  cfg.out_dir = out;
  cfg.t_samples = 201;
  return cfg;
}

}  // namespace

TEST_CASE("exit codes and error records") {
  CHECK(experiments::exit_code(ErrorKind::InvalidConfig) == 1);
  CHECK(experiments::exit_code(ErrorKind::MissingInput) == 1);
  CHECK(experiments::exit_code(ErrorKind::CriticalRegime) == 1);
  CHECK(experiments::exit_code(ErrorKind::StepFailure) == 2);
  CHECK(experiments::exit_code(ErrorKind::QuadratureNonConvergence) == 2);
  const auto rec = experiments::error_record("spectrum", ErrorKind::CriticalRegime, "mu \"S\" = 0");
  CHECK(rec.find("\"experiment\": \"spectrum\"") != std::string::npos);
  CHECK(rec.find("\"error\": \"CriticalRegime\"") != std::string::npos);
  CHECK(rec.find("\"exit_code\": 1") != std::string::npos);
  CHECK(rec.find("mu \\\"S\\\" = 0") != std::string::npos);
}

TEST_CASE("classical-traj") {
  ScratchDir dir("traj");
  auto cfg = small(Experiment::ClassicalTraj, dir.path());
  cfg.phys = PhysicalParams::natural_units(1.0, 0.5);
  const auto rep = experiments::run(cfg);
  const auto t = io::read_csv(dir / "trajectory.csv");
  CHECK(t.header == std::vector<std::string>{"t", "q1", "q2", "x1", "x2", "p1", "p2"});
  CHECK(t.rows.size() == 201);
  CHECK(std::filesystem::exists(dir / "closed_form.csv"));
  CHECK(std::filesystem::exists(dir / "trajectory.gp"));
  for (const auto& c : rep.checks) {
    CAPTURE(c.name);
    CHECK(c.pass);
  }
}

TEST_CASE("spectrum") {
  ScratchDir dir("spec");
  auto cfg = small(Experiment::Spectrum, dir.path());
  cfg.N = 6;
  cfg.phys = PhysicalParams::natural_units(1.0, 1.0);
  experiments::run(cfg);
  const auto t = io::read_csv(dir / "spectrum.csv");
  CHECK(t.header == std::vector<std::string>{"n", "E_symmetric", "E_landau"});
  CHECK(t.rows.size() == 7);
  CHECK(std::stod(t.rows[0][1]) == doctest::Approx(0.5 * 0.75));
  std::ifstream h(dir / "H_symmetric.txt");
  const auto m = io::read_triplets(h, 7, 7);
  CHECK(m(3, 3).real() == doctest::Approx(3.5 * 0.75));

  cfg.phys = PhysicalParams::natural_units(1.0, 4.0);
  experiments::run(cfg);
  CHECK(std::filesystem::exists(dir / "H_critical_sym.txt"));
}

TEST_CASE("mm-evolve") {
  ScratchDir dir("mm");
  auto cfg = small(Experiment::MmEvolve, dir.path());
  cfg.phys = PhysicalParams::natural_units(1.0, 0.5);
  const auto rep = experiments::run(cfg);
  for (const auto& c : rep.checks) {
    CAPTURE(c.name);
    CHECK(c.pass);
  }
  CHECK(io::read_csv(dir / "dispersions.csv").header ==
        std::vector<std::string>{"quantity", "closed_form", "fock"});
  CHECK(io::read_csv(dir / "mm_trajectory.csv").rows.size() == 201);
}

TEST_CASE("lambda-error") {
  ScratchDir dir("err");
  auto cfg = small(Experiment::LambdaError, dir.path());
  cfg.l = config::Range::parse("1:5.5:0.05");
  const auto rep = experiments::run(cfg);
  const auto f1 = io::read_csv(dir / "fig1.csv");
  CHECK(f1.header == std::vector<std::string>{"lambda", "l", "zeta_abs", "error"});
  CHECK(f1.rows.size() == 13);
  CHECK(std::stod(f1.rows[0][3]) == doctest::Approx(0.5));  // l = 2 at lambda = 0
  CHECK(find_check(rep, "fig1_strictly_decreasing_in_lambda") != nullptr);
  const auto* c7 = find_check(rep, "fig2_lambda2_integers_beat_half_integers");
  REQUIRE(c7 != nullptr);
  CHECK(c7->pass);
  CHECK(std::filesystem::exists(dir / "fig1.gp"));
  CHECK(std::filesystem::exists(dir / "fig2.gp"));
}

TEST_CASE("lambda-phase at lambda 0 is the unit circle") {
  ScratchDir dir("phase");
  auto cfg = small(Experiment::LambdaPhase, dir.path());
  cfg.lambda = config::Range::single(0.0);
  const auto rep = experiments::run(cfg);
  const auto* c = find_check(rep, "lambda0_matches_zeta_exp_minus_it");
  REQUIRE(c != nullptr);
  CHECK(c->pass);
  const auto t = io::read_csv(dir / "fig3.csv");
  for (const auto& row : t.rows) CHECK(std::stod(row[3]) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("lambda-radius") {
  ScratchDir dir("radius");
  auto cfg = small(Experiment::LambdaRadius, dir.path());
  cfg.lambda = config::Range::parse("0,0.25,0.3,0.5,1,7");
  cfg.r_samples = 20000;
  const auto rep = experiments::run(cfg);
  CHECK(rep.checks.size() == 4);
  for (const auto& c : rep.checks) {
    CAPTURE(c.name);
    CHECK(c.pass);
  }
}

TEST_CASE("quantize-verify") {
  ScratchDir dir("verify");
  auto cfg = small(Experiment::QuantizeVerify, dir.path());
  cfg.N = 10;
  cfg.lambda = config::Range::single(2.0);
  const auto rep = experiments::run(cfg);
  const auto t = io::read_csv(dir / "verification.csv");
  CHECK(t.header ==
        std::vector<std::string>{"identity", "N", "lambda", "max_abs_err", "trust_band"});
  for (const auto& row : t.rows) {
    CAPTURE(row[0]);
    CHECK(std::stod(row[3]) < 1e-6);
  }
  std::ifstream z(dir / "zeta_quantized.txt");
  const auto m = io::read_triplets(z, 11, 11);
  CHECK(std::abs(m(0, 1) - std::exp(1.0)) < 1e-6);
}

TEST_CASE("weight-moments") {
  ScratchDir dir("moments");
  auto cfg = small(Experiment::WeightMoments, dir.path());
  const auto rep = experiments::run(cfg);
  const auto t = io::read_csv(dir / "moments.csv");
  CHECK(t.rows.size() == 44);
  for (const auto& row : t.rows) CHECK(std::stod(row[4]) < 1e-8);
  for (const auto& c : rep.checks) CHECK(c.pass);
}

TEST_CASE("determinism") {
  ScratchDir a("det_a"), b("det_b");
  for (const auto* d : {&a, &b}) {
    auto cfg = small(Experiment::QuantizeVerify, d->path());
    cfg.N = 8;
    cfg.seed = 7;
    cfg.lambda = config::Range::single(1.0);
    experiments::run(cfg);
  }
  CHECK(slurp(a / "verification.csv") == slurp(b / "verification.csv"));
  CHECK(slurp(a / "zeta_quantized.txt") == slurp(b / "zeta_quantized.txt"));
}

TEST_CASE("run_and_record") {
  ScratchDir dir("record");
  auto cfg = small(Experiment::Spectrum, dir.path());
  cfg.N = 4;
  std::ostringstream log, err;
  CHECK(experiments::run_and_record(cfg, log, err) == 0);
  CHECK(std::filesystem::exists(dir / "summary.txt"));
  CHECK(log.str().find("experiment: spectrum") != std::string::npos);

  cfg.experiment = Experiment::MmEvolve;
  cfg.phys = PhysicalParams::natural_units(1.0, 4.0);
  CHECK(experiments::run_and_record(cfg, log, err) == 1);
  CHECK(std::filesystem::exists(dir / "error.json"));
  CHECK_FALSE(std::filesystem::exists(dir / "summary.txt"));
  CHECK(slurp(dir / "error.json").find("CriticalRegime") != std::string::npos);
}
