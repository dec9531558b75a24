#include "ncplane/params.hpp"

#include <cmath>
#include <limits>

#include "ncplane/error.hpp"

namespace ncplane {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonPositiveConstant: return "NonPositiveConstant";
    case ErrorKind::CriticalRegime: return "CriticalRegime";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::NegativeArgument: return "NegativeArgument";
    case ErrorKind::StepFailure: return "StepFailure";
    case ErrorKind::QuadratureNonConvergence: return "QuadratureNonConvergence";
    case ErrorKind::MissingInput: return "MissingInput";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

PhysicalParams PhysicalParams::natural_units(double B, double theta) {
  return PhysicalParams{1.0, 1.0, 1.0, 1.0, B, theta};
}

PhysicalParams PhysicalParams::lambda_cs_units(double theta) {
  // m~ w~ = B/(1 - B theta/4) = 2  =>  B = 2/(1 + theta/2).
  if (theta <= -2.0) {
    throw Error(ErrorKind::InvalidConfig,
                "lambda_cs units need theta > -2 for a positive field");
  }
  return natural_units(2.0 / (1.0 + 0.5 * theta), theta);
}

DerivedParams derive(const PhysicalParams& p, double critical_tol) {
  if (!(p.hbar > 0) || !(p.mass > 0) || !(p.charge > 0) || !(p.c > 0)) {
    throw Error(ErrorKind::NonPositiveConstant,
                "hbar, mass, charge and c must be strictly positive");
  }
  DerivedParams d;
  d.phys = p;
  const double eB = p.charge * p.B;
  d.omega = p.charge * std::abs(p.B) / (p.c * p.mass);
  d.mu_S = 1.0 - eB * p.theta / (4.0 * p.c * p.hbar);
  d.mu_L = 1.0 - eB * p.theta / (2.0 * p.c * p.hbar);
  d.eps = 1.0 - eB * p.theta / (p.hbar * p.c);
  d.omega_tilde = d.omega * std::abs(d.mu_S);

  const double inf = std::numeric_limits<double>::infinity();
  const bool sym_critical = std::abs(d.mu_S) < critical_tol;
  const bool landau_critical = std::abs(d.mu_L) < critical_tol;
  d.m_tilde = sym_critical ? inf : p.mass / (d.mu_S * d.mu_S);
  d.B_tilde_S = sym_critical ? inf : p.B / d.mu_S;
  d.B_tilde_L = landau_critical ? inf : p.B / d.mu_L;
  d.mw_tilde = sym_critical ? inf : p.mass * d.omega / std::abs(d.mu_S);
  if (p.B != 0.0) {
    d.theta_crit_S = 4.0 * p.c * p.hbar / eB;
    d.theta_crit_L = 2.0 * p.c * p.hbar / eB;
  }

  if (sym_critical) {
    d.regime.kind = Regime::CriticalSym;
    d.regime.gauge = Gauge::Symmetric;
    d.regime.distance = std::abs(d.mu_S);
  } else if (landau_critical) {
    d.regime.kind = Regime::CriticalLandau;
    d.regime.gauge = Gauge::Landau;
    d.regime.distance = std::abs(d.mu_L);
  } else if (std::abs(d.mu_S) < kNearCriticalTolerance) {
    d.regime = {Regime::NearCritical, Gauge::Symmetric, std::abs(d.mu_S)};
  } else if (std::abs(d.mu_L) < kNearCriticalTolerance) {
    d.regime = {Regime::NearCritical, Gauge::Landau, std::abs(d.mu_L)};
  }
  return d;
}

void require_regular_symmetric(const DerivedParams& d) {
  if (d.regime.kind == Regime::CriticalSym) {
    throw Error(ErrorKind::CriticalRegime,
                "mu_S = 0: symmetric-gauge scales are undefined");
  }
  if (!(d.mw_tilde > 0.0)) {
    throw Error(ErrorKind::DomainError, "B = 0: no cyclotron scale");
  }
}

ScaleSet lengths_and_scales(const DerivedParams& d) {
  require_regular_symmetric(d);
  const double hbar = d.phys.hbar;
  return {std::sqrt(2.0 * hbar / d.mw_tilde), std::sqrt(d.mw_tilde * hbar / 2.0)};
}

}  // namespace ncplane
