#pragma once

#include <optional>

namespace ncplane {

// Physical input constants. The electron charge is -charge with charge > 0;
// B and theta carry algebraic signs.
struct PhysicalParams {
  double hbar = 1.0;
  double mass = 1.0;
  double charge = 1.0;
  double c = 1.0;
  double B = 1.0;
  double theta = 0.0;

  // hbar = c = m = e = 1.
  static PhysicalParams natural_units(double B, double theta);

  // hbar = c = m = e = 1 with B picked so that m~ w~ = 2, i.e. the units in
  // which the lambda coherent states are dimensionless. Requires theta > -2.
  static PhysicalParams lambda_cs_units(double theta = 0.0);
};

enum class Gauge { Landau, Symmetric, LandauAlt };

enum class Regime { Regular, CriticalSym, CriticalLandau, NearCritical };

struct RegimeInfo {
  Regime kind = Regime::Regular;
  // Set for NearCritical: which gauge is close and |mu| for that gauge.
  std::optional<Gauge> gauge;
  double distance = 0.0;
};

struct DerivedParams {
  PhysicalParams phys;

  double omega = 0.0;        // e|B|/(c m)
  double mu_S = 1.0;         // 1 - eB theta/(4 c hbar)
  double mu_L = 1.0;         // 1 - eB theta/(2 c hbar)
  // Axis ratio of the Landau-gauge ellipse (not a geometric eccentricity).
  double eps = 1.0;
  double omega_tilde = 0.0;  // omega |mu_S|
  double m_tilde = 0.0;      // m / mu_S^2, infinite at mu_S = 0
  double B_tilde_S = 0.0;
  double B_tilde_L = 0.0;
  std::optional<double> theta_crit_S;  // 4 c hbar/(e B), absent for B = 0
  std::optional<double> theta_crit_L;  // 2 c hbar/(e B)
  double mw_tilde = 0.0;     // m~ w~ = m w/|mu_S|

  RegimeInfo regime;
};

// Scales used by the coherent-state formulas.
struct ScaleSet {
  double length = 0.0;    // sqrt(2 hbar/(m~ w~))
  double momentum = 0.0;  // sqrt(m~ w~ hbar/2)
};

inline constexpr double kCriticalTolerance = 1e-12;
inline constexpr double kNearCriticalTolerance = 1e-3;

// Throws Error(NonPositiveConstant) if hbar, m, e or c <= 0.
DerivedParams derive(const PhysicalParams& p,
                     double critical_tol = kCriticalTolerance);

// Throws Error(CriticalRegime) when mu_S vanishes.
ScaleSet lengths_and_scales(const DerivedParams& d);

// Throws Error(CriticalRegime) unless |mu_S| is above the critical tolerance,
// Error(DomainError) when B = 0.
void require_regular_symmetric(const DerivedParams& d);

}  // namespace ncplane
