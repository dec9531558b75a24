#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <vector>

#include "ncplane/params.hpp"

namespace ncplane::classical {

using Vec2 = Eigen::Vector2d;

struct OrbitSpec {
  OrbitSpec(double R, double phi, Vec2 q0, Gauge gauge);

  double R;    // minor radius (Landau) or circle radius (symmetric)
  double phi;  // reduced to [0, 2pi)
  Vec2 q0;
  Gauge gauge;
};

struct TrajectorySample {
  double t = 0.0;
  Vec2 q = Vec2::Zero();
  std::optional<Vec2> x;  // commuting coordinates
  Vec2 p = Vec2::Zero();
};

// Vector potential A(q) of a uniform field in one of three gauges:
//   Landau     A = B (0, q1)
//   Symmetric  A = B/2 (-q2, q1)
//   LandauAlt  A = -B (q2, 0)
class GaugeField {
 public:
  GaugeField(Gauge gauge, double B) : gauge_(gauge), B_(B) {}

  Gauge gauge() const { return gauge_; }
  double B() const { return B_; }

  Vec2 potential(const Vec2& q) const { return jacobian() * q; }

  // jacobian()(k, i) = dA_k/dq^i; constant for all three gauges.
  Eigen::Matrix2d jacobian() const;

  // dA2/dq1 - dA1/dq2 by central differences of potential().
  double curl_fd(const Vec2& q, double h = 1e-4) const;

 private:
  Gauge gauge_;
  double B_;
};

// Noncommutative: state is (q, p) and the equations are
//   p' = -dH/dq,  q'^i = dH/dp_i + (theta^{ij}/hbar) dH/dq^j.
// Commuting: state is (x, p) and Hamilton's equations hold for
//   H_theta(x, p) = H(x - theta eps p/(2 hbar), p).
enum class Coordinates { Noncommutative, Commuting };

struct PhaseState {
  Vec2 position;  // q or x, depending on Coordinates
  Vec2 p;
};

struct IntegrationOptions {
  double tolerance = 1e-8;               // relative to the orbit radius
  long long max_total_steps = 1LL << 20;
};

// H(q, p) = |p + (e/c) A(q)|^2 / 2m.
double hamiltonian(const DerivedParams& d, const GaugeField& gauge, const Vec2& q,
                   const Vec2& p);

// The same energy evaluated in commuting coordinates.
double hamiltonian_commuting(const DerivedParams& d, const GaugeField& gauge,
                             const Vec2& x, const Vec2& p);

Vec2 q_from_x(const DerivedParams& d, const Vec2& x, const Vec2& p);
Vec2 x_from_q(const DerivedParams& d, const Vec2& q, const Vec2& p);

// Closed forms. Landau: q1 = q01 + R cos(wt+phi), q2 = q02 + s eps R sin(wt+phi)
// with s = sign(B); LandauAlt swaps the role of the axes. Symmetric:
// circle of radius R at w~ = w|mu_S|, orientation sign(B mu_S). The returned
// momenta are the ones that generate the orbit under the noncommutative
// equations of motion (Landau gauges and symmetric with mu_L != 0).
TrajectorySample closed_form_landau(const DerivedParams& d, const OrbitSpec& o, double t);
TrajectorySample closed_form_symmetric(const DerivedParams& d, const OrbitSpec& o, double t);
TrajectorySample closed_form(const DerivedParams& d, const OrbitSpec& o, double t);

// RK4 with step doubling until the Richardson estimate of the position error
// is below tolerance * (orbit radius). Throws Error(StepFailure).
std::vector<TrajectorySample> integrate_eom(const DerivedParams& d, const GaugeField& gauge,
                                            Coordinates coords, const PhaseState& init,
                                            std::span<const double> t_grid,
                                            const IntegrationOptions& options = {});

// Period of the closed-form orbit: 2pi/w (Landau) or 2pi/w~ (symmetric).
double orbit_period(const DerivedParams& d, Gauge gauge);

enum class EnergyCoordinates { QCoords, XCoords };

// Radius/energy relation: R = sqrt(2E/(m w^2)) for q, and
// R~ = sqrt(2E/(m (mu_S w)^2)) for x. Throws CriticalRegime for XCoords at mu_S = 0.
double energy_radius(const DerivedParams& d, EnergyCoordinates which, double E);

}  // namespace ncplane::classical
