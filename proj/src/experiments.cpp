#include "ncplane/experiments.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "ncplane/classical.hpp"
#include "ncplane/cstates.hpp"
#include "ncplane/fock.hpp"
#include "ncplane/io.hpp"
#include "ncplane/plot_scripts.hpp"
#include "ncplane/quantize.hpp"

namespace ncplane::experiments {

namespace fs = std::filesystem;
using config::Experiment;
using config::ExperimentConfig;
using config::Range;

namespace {

constexpr double kPi = std::numbers::pi;

Check bound(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, value <= threshold};
}

Check property(std::string name, bool holds) {
  return {std::move(name), holds ? 0.0 : 1.0, 0.0, holds};
}

std::vector<double> time_grid(double t0, double t1, int n) {
  std::vector<double> t(n);
  for (int k = 0; k < n; ++k) t[k] = t0 + (t1 - t0) * double(k) / double(n - 1);
  return t;
}

const std::vector<double>& grid_or(const std::optional<Range>& r, const Range& fallback,
                                   Range& storage) {
  storage = r ? *r : fallback;
  return storage.values;
}

// ---------------------------------------------------------------------------

void classical_traj(const ExperimentConfig& cfg, Report& rep) {
  const auto d = derive(cfg.phys);
  const classical::OrbitSpec orbit(cfg.R, cfg.phi, {cfg.q0_1, cfg.q0_2}, cfg.gauge);
  const double period = classical::orbit_period(d, cfg.gauge);
  if (!cfg.t_max && !std::isfinite(period)) {
    throw Error(ErrorKind::CriticalRegime, "orbit has no finite period; give t_max");
  }
  const auto t = time_grid(cfg.t_min, cfg.t_max.value_or(cfg.t_min + period), cfg.t_samples);
  const std::vector<std::string> header{"t", "q1", "q2", "x1", "x2", "p1", "p2"};

  auto write = [&](const fs::path& path, const std::vector<classical::TrajectorySample>& s) {
    io::CsvWriter w(path, header);
    for (const auto& p : s) {
      std::optional<double> x1, x2;
      if (p.x) {
        x1 = p.x->x();
        x2 = p.x->y();
      }
      w.row({p.t, p.q.x(), p.q.y(), x1, x2, p.p.x(), p.p.y()});
    }
    rep.files.push_back(path);
  };

  std::vector<classical::TrajectorySample> closed;
  for (double ti : t) {
    auto s = classical::closed_form(d, orbit, ti);
    if (s.p.allFinite()) s.x = classical::x_from_q(d, s.q, s.p);
    closed.push_back(s);
  }
  write(cfg.out_dir / "closed_form.csv", closed);

  const auto& start = closed.front();
  if (!start.p.allFinite()) {
    rep.notes.push_back(
        "mu_L = 0: the closed-form orbit has no generating momenta; integration skipped");
    return;
  }
  const classical::PhaseState init{
      cfg.coordinates == classical::Coordinates::Commuting ? *start.x : start.q, start.p};
  const classical::GaugeField field(cfg.gauge, cfg.phys.B);
  const auto integrated = classical::integrate_eom(d, field, cfg.coordinates, init, t,
                                                   {cfg.tolerance, 1LL << 20});
  const auto path = cfg.out_dir / "trajectory.csv";
  write(path, integrated);
  rep.files.push_back(plot::write_plot_script(plot::Figure::Trajectory, path));

  double dev = 0.0, e_drift = 0.0;
  const double e0 = classical::hamiltonian(d, field, integrated.front().q, integrated.front().p);
  for (std::size_t i = 0; i < t.size(); ++i) {
    dev = std::max(dev, (integrated[i].q - closed[i].q).norm());
    const double e = classical::hamiltonian(d, field, integrated[i].q, integrated[i].p);
    e_drift = std::max(e_drift, std::abs(e - e0) / std::max(1.0, std::abs(e0)));
  }
  rep.checks.push_back(bound("integrator_vs_closed_form_over_R", dev / std::max(cfg.R, 1e-300),
                             std::max(cfg.tolerance, 1e-8)));
  rep.checks.push_back(bound("relative_energy_drift", e_drift, 1e-6));
}

void spectrum(const ExperimentConfig& cfg, Report& rep) {
  const int N = cfg.N.value_or(10);
  const auto d = derive(cfg.phys);
  const bool sym_critical = d.regime.kind == Regime::CriticalSym;
  // at mu_S = 0 the symmetric ladder does not exist; that column stays empty
  std::optional<fock::Operator> hs;
  if (!sym_critical) hs = fock::hamiltonian_symmetric(d, N);
  const auto hl = fock::hamiltonian_landau(d, N);
  const auto path = cfg.out_dir / "spectrum.csv";
  {
    io::CsvWriter w(path, {"n", "E_symmetric", "E_landau"});
    for (int n = 0; n <= N; ++n) {
      const std::optional<double> es =
          hs ? std::optional<double>((*hs)(n, n).real()) : std::nullopt;
      w.row({n, es, hl(n, n).real()});
    }
  }
  rep.files.push_back(path);
  if (hs) {
    io::write_triplets(cfg.out_dir / "H_symmetric.txt", hs->matrix());
    rep.files.push_back(cfg.out_dir / "H_symmetric.txt");
  }
  io::write_triplets(cfg.out_dir / "H_landau.txt", hl.matrix());
  rep.files.push_back(cfg.out_dir / "H_landau.txt");

  if (hs) {
    double ratio_err = 0.0;
    for (int n = 0; n <= N; ++n) {
      ratio_err = std::max(ratio_err,
                           std::abs((*hs)(n, n).real() - std::abs(d.mu_S) * hl(n, n).real()) /
                               std::max(1.0, std::abs(hl(n, n).real())));
    }
    rep.checks.push_back(bound("symmetric_over_landau_minus_abs_mu_S", ratio_err, 1e-12));
  }

  if (sym_critical && cfg.phys.B != 0.0) {
    const int Nc = std::min(N, 24);
    const auto hc = fock::hamiltonian_critical_sym(cfg.phys, Nc);
    io::write_triplets(cfg.out_dir / "H_critical_sym.txt", hc.matrix(), 1e-300);
    rep.files.push_back(cfg.out_dir / "H_critical_sym.txt");
    rep.notes.push_back("theta at the symmetric critical value: position-only Hamiltonian dumped");
  }
}

void mm_evolve(const ExperimentConfig& cfg, Report& rep) {
  const auto d = derive(cfg.phys);
  require_regular_symmetric(d);
  const double period = 2.0 * kPi / d.omega_tilde;
  const auto t = time_grid(cfg.t_min, cfg.t_max.value_or(cfg.t_min + period), cfg.t_samples);
  const cstates::Complex beta{cfg.beta_re, cfg.beta_im};

  double dev = 0.0;
  {
    const auto path = cfg.out_dir / "mm_trajectory.csv";
    io::CsvWriter w(path, {"t", "r1", "r2", "r1_fock", "r2_fock"});
    const auto fock_path = cstates::mm_mean_trajectory_fock(d, cfg.R, cfg.phi, beta, t);
    for (std::size_t i = 0; i < t.size(); ++i) {
      const auto a = cstates::mm_mean_trajectory(d, cfg.R, cfg.phi, t[i]);
      const auto& b = fock_path[i];
      dev = std::max(dev, (a - b).norm());
      w.row({t[i], a.x(), a.y(), b.x(), b.y()});
    }
    rep.files.push_back(path);
  }
  rep.checks.push_back(bound("mean_trajectory_closed_vs_fock", dev, 1e-10));

  const auto disp = cstates::mm_dispersions(d);
  const cstates::Complex alpha = std::polar(cfg.R / std::sqrt(d.phys.hbar), -cfg.phi);
  const auto fd = cstates::mm_dispersions_fock(d, alpha, beta);
  {
    const auto path = cfg.out_dir / "dispersions.csv";
    io::CsvWriter w(path, {"quantity", "closed_form", "fock"});
    w.row({"dx1", disp.dx, fd.dx_1});
    w.row({"dx2", disp.dx, fd.dx_2});
    w.row({"dp1", disp.dp, fd.dp_1});
    w.row({"dp2", disp.dp, fd.dp_2});
    w.row({"product", disp.product, fd.dx_1 * fd.dp_1});
    rep.files.push_back(path);
  }
  rep.checks.push_back(bound("closed_form_product_minus_hbar_over_2",
                             std::abs(disp.product - 0.5 * d.phys.hbar), 1e-15));
  const double fock_err = std::max({std::abs(fd.dx_1 - disp.dx), std::abs(fd.dx_2 - disp.dx),
                                    std::abs(fd.dp_1 - disp.dp), std::abs(fd.dp_2 - disp.dp)});
  rep.checks.push_back(bound("dispersions_closed_vs_fock", fock_err, 1e-10));

  {
    const auto path = cfg.out_dir / "landau_x1.csv";
    io::CsvWriter w(path, {"t", "x1", "x1_fock"});
    double ldev = 0.0;
    const auto fock_x1 = cstates::landau_mean_x1_fock(d, cfg.R, cfg.phi, cfg.k2, t);
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double a = cstates::landau_mean_x1(d, cfg.R, cfg.phi, cfg.k2, t[i]);
      ldev = std::max(ldev, std::abs(a - fock_x1[i]));
      w.row({t[i], a, fock_x1[i]});
    }
    rep.files.push_back(path);
    rep.checks.push_back(bound("landau_mean_x1_closed_vs_fock", ldev, 1e-10));
  }
}

void lambda_error(const ExperimentConfig& cfg, Report& rep) {
  const std::vector<std::string> header{"lambda", "l", "zeta_abs", "error"};
  Range s1, s2, s3;
  const auto& lambdas = grid_or(cfg.lambda, Range::parse("0:6:0.5"), s1);
  const auto& fig2_lambdas = grid_or(cfg.fig2_lambdas, Range::parse("2,4,6"), s2);
  const auto& ls = grid_or(cfg.l, Range::parse("0.1:6:0.01"), s3);

  std::vector<double> e1;
  {
    const auto path = cfg.out_dir / "fig1.csv";
    io::CsvWriter w(path, header);
    for (double lam : lambdas) {
      const double l = cstates::classical_l_from_zeta(cfg.zeta_abs, lam);
      const double e = cstates::error_function(lam, l);
      e1.push_back(e);
      w.row({lam, l, cfg.zeta_abs, e});
    }
    w.close();
    rep.files.push_back(path);
    rep.files.push_back(plot::write_plot_script(plot::Figure::Fig1, path));
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < e1.size(); ++i) decreasing = decreasing && e1[i] < e1[i - 1];
  rep.checks.push_back(property("fig1_strictly_decreasing_in_lambda", decreasing));

  double near_int = 0.0, near_half = 0.0;
  int n_int = 0, n_half = 0;
  {
    const auto path = cfg.out_dir / "fig2.csv";
    io::CsvWriter w(path, header);
    for (double lam : fig2_lambdas) {
      for (double l : ls) {
        const double zeta_abs = std::sqrt(0.5 * l * std::exp(0.5 * lam * l));
        const double e = cstates::error_function(lam, l);
        w.row({lam, l, zeta_abs, e});
        if (lam == 2.0 && l >= 1.5 - 1e-9 && l <= 5.5 + 1e-9) {
          if (std::abs(l - std::round(l)) <= 0.1 + 1e-9) {
            near_int += e;
            ++n_int;
          } else if (std::abs(l - std::floor(l) - 0.5) <= 0.1 + 1e-9) {
            near_half += e;
            ++n_half;
          }
        }
      }
    }
    w.close();
    rep.files.push_back(path);
    rep.files.push_back(plot::write_plot_script(plot::Figure::Fig2, path));
  }
  if (n_int > 0 && n_half > 0) {
    near_int /= n_int;
    near_half /= n_half;
    rep.checks.push_back(property("fig2_lambda2_integers_beat_half_integers", near_int < near_half));
    std::ostringstream note;
    note << "fig2 lambda=2: mean e near integers " << io::format_double(near_int)
         << ", near half-integers " << io::format_double(near_half);
    rep.notes.push_back(note.str());
  }
}

void lambda_phase(const ExperimentConfig& cfg, Report& rep) {
  const double lam = cfg.lambda ? cfg.lambda->values.front() : 2.0;
  const cstates::Complex zeta{cfg.zeta_re, cfg.zeta_im};
  const auto t = time_grid(cfg.t_min, cfg.t_max.value_or(8.0 * kPi), cfg.t_samples);
  const cstates::LowerSymbolTrajectory traj(zeta, lam, cfg.gap);
  double circle_dev = 0.0;
  const auto path = cfg.out_dir / "fig3.csv";
  {
    io::CsvWriter w(path, {"t", "re_zeta", "im_zeta", "abs_zeta"});
    for (double ti : t) {
      const auto z = traj.at(ti);
      w.row({ti, z.real(), z.imag(), std::abs(z)});
      circle_dev = std::max(circle_dev, std::abs(z - zeta * std::polar(1.0, -ti)));
    }
  }
  rep.files.push_back(path);
  rep.files.push_back(plot::write_plot_script(plot::Figure::Fig3, path));
  if (lam == 0.0 && cfg.gap == cstates::GapConvention::GeneralizedFactorial) {
    rep.checks.push_back(bound("lambda0_matches_zeta_exp_minus_it", circle_dev, 1e-12));
  }
  rep.notes.push_back("series terms kept: " + std::to_string(traj.terms()));
}

void lambda_radius(const ExperimentConfig& cfg, Report& rep) {
  Range storage;
  const auto& lambdas = grid_or(cfg.lambda, Range::parse("0:8:0.05"), storage);
  const cstates::Complex zeta{cfg.zeta_re, cfg.zeta_im};
  const double t_max = cfg.t_max.value_or(8.0 * kPi);
  const auto path = cfg.out_dir / "fig4.csv";
  std::optional<double> r0, r7_gap;
  double min_r = std::numeric_limits<double>::infinity(), min_at = 0.0;
  {
    io::CsvWriter w(path, {"lambda", "r_int", "r_ext"});
    for (double lam : lambdas) {
      const auto r = cstates::internal_radius(zeta, lam, t_max, cfg.r_samples, cfg.gap);
      w.row({lam, r.r_int, r.r_ext});
      if (lam == 0.0) r0 = r.r_int;
      if (std::abs(lam - 7.0) < 1e-9) r7_gap = r.r_ext - r.r_int;
      if (lam <= 1.0 + 1e-12 && r.r_int < min_r) {
        min_r = r.r_int;
        min_at = lam;
      }
    }
  }
  rep.files.push_back(path);
  rep.files.push_back(plot::write_plot_script(plot::Figure::Fig4, path));
  if (r0) rep.checks.push_back(bound("r_int_at_lambda0_minus_abs_zeta", std::abs(*r0 - std::abs(zeta)), 1e-6));
  if (std::isfinite(min_r)) {
    rep.checks.push_back(property("min_r_int_on_0_1_located_in_0.2_0.5",
                                  min_at >= 0.2 - 1e-12 && min_at <= 0.5 + 1e-12));
    rep.checks.push_back(bound("min_r_int_on_0_1", min_r, 0.1));
  }
  if (r7_gap) rep.checks.push_back(bound("r_ext_minus_r_int_at_lambda7", *r7_gap, 0.05));
}

// Seeded sweep: |p(zeta)|^2 for a random cubic p quantizes to a positive
// semidefinite matrix, and a random real symbol to a Hermitian one.
void random_rows(const ExperimentConfig& cfg, int N, double lam,
                 std::vector<quantize::VerificationRow>& rows) {
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> g(0.0, 1.0);
  constexpr int trials = 8;
  double worst_pos = 0.0, worst_herm = 0.0;
  for (int k = 0; k < trials; ++k) {
    std::array<cstates::Complex, 4> c;
    for (auto& ci : c) ci = {g(rng), g(rng)};
    quantize::ClassicalObservable pos, real;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) pos.add(i, j, c[i] * std::conj(c[j]));
    }
    const auto P = quantize::quantize_lambda(pos, lam, N).op;
    const int band = P.trust_limit();
    if (band >= 0) {
      const fock::Operator::Matrix block = P.matrix().topLeftCorner(band + 1, band + 1);
      Eigen::SelfAdjointEigenSolver<fock::Operator::Matrix> es(block, Eigen::EigenvaluesOnly);
      const auto ev = es.eigenvalues();
      worst_pos = std::max(worst_pos, std::max(0.0, -ev.minCoeff()) / ev.cwiseAbs().maxCoeff());
    }
    // f + conj(f) for f = c0 zeta^2 conj(zeta) + c1 zeta
    real.add(2, 1, c[0]).add(1, 2, std::conj(c[0])).add(1, 0, c[1]).add(0, 1, std::conj(c[1]));
    const auto H = quantize::quantize_lambda(real, lam, N).op;
    worst_herm = std::max(worst_herm, fock::hermiticity_defect(H) /
                                          std::max(1.0, H.matrix().cwiseAbs().maxCoeff()));
  }
  rows.push_back({"random_abs2_positivity_rel", N, lam, worst_pos, N - 3});
  rows.push_back({"random_real_symbol_hermiticity_rel", N, lam, worst_herm, N});
}

void quantize_verify(const ExperimentConfig& cfg, Report& rep) {
  const int N = cfg.N.value_or(10);
  Range storage;
  const auto& lambdas = grid_or(cfg.lambda, Range::parse("1,2"), storage);
  const auto path = cfg.out_dir / "verification.csv";
  double worst = 0.0;
  {
    io::CsvWriter w(path, {"identity", "N", "lambda", "max_abs_err", "trust_band"});
    for (double lam : lambdas) {
      auto rows = quantize::verification_report(N, lam, cfg.phys.theta);
      random_rows(cfg, N, lam, rows);
      for (const auto& r : rows) {
        w.row({r.identity, r.N, r.lambda, r.max_abs_err, r.trust_band});
        worst = std::max(worst, r.max_abs_err);
      }
    }
  }
  rep.files.push_back(path);
  const auto zq = quantize::quantize_lambda(quantize::ClassicalObservable::monomial(1, 0),
                                            lambdas.front(), N);
  io::write_triplets(cfg.out_dir / "zeta_quantized.txt", zq.op.matrix());
  rep.files.push_back(cfg.out_dir / "zeta_quantized.txt");
  rep.checks.push_back(bound("all_identities", worst, 1e-6));
}

void weight_moments(const ExperimentConfig& cfg, Report& rep) {
  Range storage;
  const auto& lambdas = grid_or(cfg.lambda, Range::parse("0.5,1,2,4"), storage);
  const auto path = cfg.out_dir / "moments.csv";
  double worst = 0.0;
  const auto t0 = std::chrono::steady_clock::now();
  {
    io::CsvWriter w(path, {"lambda", "n", "numeric", "analytic", "rel_error"});
    for (double lam : lambdas) {
      const auto ms = quantize::WeightFunction(lam).moments(cfg.n_max);
      for (int n = 0; n <= cfg.n_max; ++n) {
        w.row({lam, n, ms[n].value, ms[n].target, ms[n].rel_error});
        worst = std::max(worst, ms[n].rel_error);
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rep.files.push_back(path);
  rep.checks.push_back(bound("max_moment_rel_error", worst, 1e-8));
  rep.checks.push_back(bound("moment_runtime_seconds", secs, 1.0));
}

}  // namespace

Report run(const ExperimentConfig& cfg) {
  config::validate(cfg);
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec || !fs::is_directory(cfg.out_dir)) {
    throw Error(ErrorKind::InvalidConfig, "cannot create output directory " + cfg.out_dir.string());
  }
  Report rep;
  rep.experiment = config::experiment_name(cfg.experiment);
  const auto t0 = std::chrono::steady_clock::now();
  switch (cfg.experiment) {
    case Experiment::ClassicalTraj: classical_traj(cfg, rep); break;
    case Experiment::Spectrum: spectrum(cfg, rep); break;
    case Experiment::MmEvolve: mm_evolve(cfg, rep); break;
    case Experiment::LambdaError: lambda_error(cfg, rep); break;
    case Experiment::LambdaPhase: lambda_phase(cfg, rep); break;
    case Experiment::LambdaRadius: lambda_radius(cfg, rep); break;
    case Experiment::QuantizeVerify: quantize_verify(cfg, rep); break;
    case Experiment::WeightMoments: weight_moments(cfg, rep); break;
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::StepFailure:
    case ErrorKind::QuadratureNonConvergence: return 2;
    default: return 1;
  }
}

std::string error_record(const std::string& experiment, ErrorKind kind,
                         const std::string& message) {
  nlohmann::ordered_json j;
  j["experiment"] = experiment;
  j["error"] = std::string(to_string(kind));
  j["message"] = message;
  j["exit_code"] = exit_code(kind);
  return j.dump(2);
}

std::string summary_text(const Report& r) {
  std::ostringstream os;
  os << "experiment: " << r.experiment << '\n';
  os << "runtime_seconds: " << io::format_double(r.seconds) << '\n';
  os << "outputs:";
  for (const auto& f : r.files) os << ' ' << f.filename().string();
  os << '\n';
  os << "checks: " << r.checks.size() << '\n';
  for (const auto& c : r.checks) {
    os << "  " << (c.pass ? "PASS " : "FAIL ") << c.name << " value=" << io::format_double(c.value)
       << " threshold=" << io::format_double(c.threshold) << '\n';
  }
  for (const auto& n : r.notes) os << "note: " << n << '\n';
  return os.str();
}

int run_and_record(const ExperimentConfig& cfg, std::ostream& log, std::ostream& err) {
  const std::string name = config::experiment_name(cfg.experiment);
  auto record = [&](ErrorKind kind, const std::string& msg) {
    const std::string json = error_record(name, kind, msg);
    err << json << '\n';
    std::error_code ec;
    if (fs::is_directory(cfg.out_dir, ec)) {
      fs::remove(cfg.out_dir / "summary.txt", ec);
      std::ofstream(cfg.out_dir / "error.json") << json << '\n';
    }
    return exit_code(kind);
  };
  try {
    const Report rep = run(cfg);
    const std::string text = summary_text(rep);
    std::error_code ec;
    fs::remove(cfg.out_dir / "error.json", ec);
    std::ofstream(cfg.out_dir / "summary.txt") << text;
    log << text;
    return 0;
  } catch (const Error& e) {
    return record(e.kind(), e.what());
  }
}

}  // namespace ncplane::experiments
