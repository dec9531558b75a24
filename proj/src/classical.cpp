#include "ncplane/classical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ncplane/error.hpp"

namespace ncplane::classical {

namespace {

using State = Eigen::Vector4d;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// theta^{ij} = theta eps^{ij}, eps^{12} = 1.
const Eigen::Matrix2d kEps = (Eigen::Matrix2d() << 0.0, 1.0, -1.0, 0.0).finished();

double sign_of(double v) { return v < 0.0 ? -1.0 : 1.0; }

struct Gradients {
  Vec2 dH_dq;
  Vec2 dH_dp;
};

Gradients gradients(const DerivedParams& d, const GaugeField& gauge, const Vec2& q,
                    const Vec2& p) {
  const auto& ph = d.phys;
  const Vec2 kinetic = p + (ph.charge / ph.c) * gauge.potential(q);
  const Vec2 dH_dp = kinetic / ph.mass;
  const Vec2 dH_dq = (ph.charge / (ph.c * ph.mass)) * gauge.jacobian().transpose() * kinetic;
  return {dH_dq, dH_dp};
}

State rhs(const DerivedParams& d, const GaugeField& gauge, Coordinates coords,
          const State& y) {
  const double theta = d.phys.theta, hbar = d.phys.hbar;
  const Vec2 pos = y.head<2>();
  const Vec2 p = y.tail<2>();
  State dy;
  if (coords == Coordinates::Noncommutative) {
    const auto g = gradients(d, gauge, pos, p);
    dy.head<2>() = g.dH_dp + (theta / hbar) * kEps * g.dH_dq;
    dy.tail<2>() = -g.dH_dq;
  } else {
    const Vec2 q = q_from_x(d, pos, p);
    const auto g = gradients(d, gauge, q, p);
    dy.head<2>() = g.dH_dp - (theta / (2.0 * hbar)) * kEps.transpose() * g.dH_dq;
    dy.tail<2>() = -g.dH_dq;
  }
  return dy;
}

State rk4_step(const DerivedParams& d, const GaugeField& gauge, Coordinates coords,
               const State& y, double h) {
  const State k1 = rhs(d, gauge, coords, y);
  const State k2 = rhs(d, gauge, coords, y + 0.5 * h * k1);
  const State k3 = rhs(d, gauge, coords, y + 0.5 * h * k2);
  const State k4 = rhs(d, gauge, coords, y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// The equations of motion are linear; the spectral radius of their matrix is
// the fastest angular frequency in the problem.
double fastest_frequency(const DerivedParams& d, const GaugeField& gauge,
                         Coordinates coords) {
  Eigen::Matrix4d M;
  for (int k = 0; k < 4; ++k) M.col(k) = rhs(d, gauge, coords, State::Unit(k));
  return M.eigenvalues().cwiseAbs().maxCoeff();
}

std::vector<State> run(const DerivedParams& d, const GaugeField& gauge, Coordinates coords,
                       const State& y0, std::span<const double> t_grid, double h_max,
                       long long multiplier, long long& steps) {
  std::vector<State> out;
  out.reserve(t_grid.size());
  State y = y0;
  out.push_back(y);
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    const double span = t_grid[i] - t_grid[i - 1];
    // exact doubling between levels keeps the Richardson factor at 15
    const long long n =
        multiplier * std::max(1LL, static_cast<long long>(std::ceil(span / h_max)));
    const double h = span / static_cast<double>(n);
    for (long long k = 0; k < n; ++k) y = rk4_step(d, gauge, coords, y, h);
    steps += n;
    out.push_back(y);
  }
  return out;
}

}  // namespace

OrbitSpec::OrbitSpec(double R_, double phi_, Vec2 q0_, Gauge gauge_)
    : R(R_), phi(std::fmod(phi_, kTwoPi)), q0(std::move(q0_)), gauge(gauge_) {
  if (R < 0.0) throw Error(ErrorKind::DomainError, "orbit radius must be >= 0");
  if (phi < 0.0) phi += kTwoPi;
  if (phi >= kTwoPi) phi = 0.0;
}

Eigen::Matrix2d GaugeField::jacobian() const {
  Eigen::Matrix2d J = Eigen::Matrix2d::Zero();
  switch (gauge_) {
    case Gauge::Landau:
      J(1, 0) = B_;
      break;
    case Gauge::Symmetric:
      J(0, 1) = -0.5 * B_;
      J(1, 0) = 0.5 * B_;
      break;
    case Gauge::LandauAlt:
      J(0, 1) = -B_;
      break;
  }
  return J;
}

double GaugeField::curl_fd(const Vec2& q, double h) const {
  const Vec2 e1(h, 0.0), e2(0.0, h);
  const double dA2_dq1 = (potential(q + e1)(1) - potential(q - e1)(1)) / (2.0 * h);
  const double dA1_dq2 = (potential(q + e2)(0) - potential(q - e2)(0)) / (2.0 * h);
  return dA2_dq1 - dA1_dq2;
}

double hamiltonian(const DerivedParams& d, const GaugeField& gauge, const Vec2& q,
                   const Vec2& p) {
  const Vec2 kinetic = p + (d.phys.charge / d.phys.c) * gauge.potential(q);
  return kinetic.squaredNorm() / (2.0 * d.phys.mass);
}

double hamiltonian_commuting(const DerivedParams& d, const GaugeField& gauge,
                             const Vec2& x, const Vec2& p) {
  return hamiltonian(d, gauge, q_from_x(d, x, p), p);
}

Vec2 q_from_x(const DerivedParams& d, const Vec2& x, const Vec2& p) {
  return x - (d.phys.theta / (2.0 * d.phys.hbar)) * kEps * p;
}

Vec2 x_from_q(const DerivedParams& d, const Vec2& q, const Vec2& p) {
  return q + (d.phys.theta / (2.0 * d.phys.hbar)) * kEps * p;
}

TrajectorySample closed_form_landau(const DerivedParams& d, const OrbitSpec& o, double t) {
  if (o.gauge == Gauge::Symmetric) {
    throw Error(ErrorKind::DomainError, "closed_form_landau needs a Landau gauge");
  }
  const auto& ph = d.phys;
  const double s = sign_of(ph.B);
  const double w = d.omega;
  const double arg = w * t + o.phi;
  const double m = ph.mass;
  const double eB_c = ph.charge * ph.B / ph.c;

  TrajectorySample out;
  out.t = t;
  if (o.gauge == Gauge::Landau) {
    out.q = o.q0 + Vec2(o.R * std::cos(arg), s * d.eps * o.R * std::sin(arg));
    out.p = Vec2(-m * o.R * w * std::sin(arg), m * s * o.R * w * std::cos(arg) - eB_c * out.q(0));
  } else {
    out.q = o.q0 + Vec2(d.eps * o.R * std::cos(arg), s * o.R * std::sin(arg));
    out.p = Vec2(-m * o.R * w * std::sin(arg) + eB_c * out.q(1), m * s * o.R * w * std::cos(arg));
  }
  out.x = x_from_q(d, out.q, out.p);
  return out;
}

TrajectorySample closed_form_symmetric(const DerivedParams& d, const OrbitSpec& o, double t) {
  if (o.gauge != Gauge::Symmetric) {
    throw Error(ErrorKind::DomainError, "closed_form_symmetric needs the symmetric gauge");
  }
  const auto& ph = d.phys;
  const double sigma = sign_of(ph.B * d.mu_S);
  const double w = d.omega_tilde;
  const double arg = w * t + o.phi;

  TrajectorySample out;
  out.t = t;
  out.q = o.q0 + o.R * Vec2(std::cos(arg), sigma * std::sin(arg));
  const Vec2 qdot = o.R * w * Vec2(-std::sin(arg), sigma * std::cos(arg));
  // q' = mu_L (p + e A/c)/m, so the generating momenta do not exist at mu_L = 0.
  if (std::abs(d.mu_L) < kCriticalTolerance) {
    out.p = Vec2::Constant(std::numeric_limits<double>::quiet_NaN());
    return out;
  }
  const Vec2 kinetic = ph.mass * qdot / d.mu_L;
  const GaugeField field(Gauge::Symmetric, ph.B);
  out.p = kinetic - (ph.charge / ph.c) * field.potential(out.q);
  out.x = x_from_q(d, out.q, out.p);
  return out;
}

TrajectorySample closed_form(const DerivedParams& d, const OrbitSpec& o, double t) {
  return o.gauge == Gauge::Symmetric ? closed_form_symmetric(d, o, t)
                                     : closed_form_landau(d, o, t);
}

std::vector<TrajectorySample> integrate_eom(const DerivedParams& d, const GaugeField& gauge,
                                            Coordinates coords, const PhaseState& init,
                                            std::span<const double> t_grid,
                                            const IntegrationOptions& options) {
  if (t_grid.empty()) return {};
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) {
      throw Error(ErrorKind::DomainError, "t_grid must be strictly increasing");
    }
  }
  State y0;
  y0 << init.position, init.p;

  const double total = t_grid.back() - t_grid.front();
  const double freq = fastest_frequency(d, gauge, coords);
  double h = freq > 0.0 ? std::min(0.1 / freq, total) : total;
  if (h <= 0.0) h = 1.0;

  long long steps = 0;
  long long multiplier = 1;
  std::vector<State> coarse = run(d, gauge, coords, y0, t_grid, h, multiplier, steps);
  std::vector<State> fine;
  for (;;) {
    fine = run(d, gauge, coords, y0, t_grid, h, 2 * multiplier, steps);
    double error = 0.0, extent = 0.0;
    for (std::size_t i = 0; i < fine.size(); ++i) {
      error = std::max(error, (fine[i].head<2>() - coarse[i].head<2>()).norm() / 15.0);
      extent = std::max(extent, (fine[i].head<2>() - y0.head<2>()).norm());
    }
    // extent spans the orbit diameter
    if (error <= 0.5 * options.tolerance * extent) break;
    if (steps > options.max_total_steps) {
      throw Error(ErrorKind::StepFailure,
                  "RK4 error target not met within the step budget");
    }
    coarse = std::move(fine);
    multiplier *= 2;
  }

  std::vector<TrajectorySample> out;
  out.reserve(fine.size());
  for (std::size_t i = 0; i < fine.size(); ++i) {
    TrajectorySample s;
    s.t = t_grid[i];
    s.p = fine[i].tail<2>();
    if (coords == Coordinates::Noncommutative) {
      s.q = fine[i].head<2>();
      s.x = x_from_q(d, s.q, s.p);
    } else {
      s.x = fine[i].head<2>();
      s.q = q_from_x(d, *s.x, s.p);
    }
    out.push_back(s);
  }
  return out;
}

double orbit_period(const DerivedParams& d, Gauge gauge) {
  const double w = gauge == Gauge::Symmetric ? d.omega_tilde : d.omega;
  return w > 0.0 ? kTwoPi / w : std::numeric_limits<double>::infinity();
}

double energy_radius(const DerivedParams& d, EnergyCoordinates which, double E) {
  if (E < 0.0) throw Error(ErrorKind::DomainError, "energy must be >= 0");
  const double m = d.phys.mass;
  if (which == EnergyCoordinates::QCoords) return std::sqrt(2.0 * E / (m * d.omega * d.omega));
  require_regular_symmetric(d);
  const double w = d.mu_S * d.omega;
  return std::sqrt(2.0 * E / (m * w * w));
}

}  // namespace ncplane::classical
