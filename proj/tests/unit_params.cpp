#include <doctest.h>

#include <cmath>

#include "ncplane/error.hpp"
#include "ncplane/params.hpp"

using namespace ncplane;
using doctest::Approx;

TEST_CASE("commutative limit") {
  const auto d = derive(PhysicalParams::natural_units(1.0, 0.0));
  CHECK(d.mu_S == 1.0);
  CHECK(d.mu_L == 1.0);
  CHECK(d.eps == 1.0);
  CHECK(d.omega == 1.0);
  CHECK(d.omega_tilde == 1.0);
  CHECK(d.m_tilde == 1.0);
  CHECK(d.regime.kind == Regime::Regular);
}

TEST_CASE("critical values of theta") {
  const auto s = derive(PhysicalParams::natural_units(1.0, 4.0));
  CHECK(s.mu_S == 0.0);
  CHECK(s.regime.kind == Regime::CriticalSym);
  CHECK(std::isinf(s.m_tilde));

  const auto l = derive(PhysicalParams::natural_units(1.0, 2.0));
  CHECK(l.mu_L == 0.0);
  CHECK(l.mu_S == 0.5);
  CHECK(l.regime.kind == Regime::CriticalLandau);
  REQUIRE(l.theta_crit_L);
  CHECK(*l.theta_crit_L == 2.0);
  CHECK(*l.theta_crit_S == 4.0);
}

TEST_CASE("B = 2, theta = 1") {
  const auto d = derive(PhysicalParams::natural_units(2.0, 1.0));
  CHECK(d.mu_S == 0.5);
  CHECK(d.omega_tilde == Approx(d.omega / 2));
  // Axis ratio from the equations of motion: 1 - eB theta/(hbar c).
  CHECK(d.eps == -1.0);
}

TEST_CASE("near-critical flag") {
  const auto d = derive(PhysicalParams::natural_units(1.0, 4.0 * (1.0 - 1e-4)));
  CHECK(d.regime.kind == Regime::NearCritical);
  REQUIRE(d.regime.gauge);
  CHECK(*d.regime.gauge == Gauge::Symmetric);
  CHECK(d.regime.distance == Approx(1e-4).epsilon(1e-6));
}

TEST_CASE("zero field has no critical theta") {
  const auto d = derive(PhysicalParams::natural_units(0.0, 3.0));
  CHECK_FALSE(d.theta_crit_S.has_value());
  CHECK(d.omega == 0.0);
  CHECK_THROWS_AS(lengths_and_scales(d), Error);
}

TEST_CASE("non-positive constants are rejected") {
  for (int which = 0; which < 4; ++which) {
    PhysicalParams p;
    double* field[] = {&p.hbar, &p.mass, &p.charge, &p.c};
    *field[which] = which % 2 ? 0.0 : -1.0;
    try {
      derive(p);
      FAIL("expected NonPositiveConstant");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NonPositiveConstant);
    }
  }
}

TEST_CASE("length and momentum scales") {
  SUBCASE("lambda-cs units give l = 1") {
    for (double theta : {0.0, 0.7, -1.5}) {
      const auto s = lengths_and_scales(derive(PhysicalParams::lambda_cs_units(theta)));
      CHECK(s.length == Approx(1.0).epsilon(1e-14));
    }
  }
  SUBCASE("commutative natural units give sqrt 2") {
    const auto s = lengths_and_scales(derive(PhysicalParams::natural_units(1.0, 0.0)));
    CHECK(s.length == Approx(std::sqrt(2.0)).epsilon(1e-15));
  }
  SUBCASE("theta = 2 halves mu_S") {
    const auto d = derive(PhysicalParams::natural_units(1.0, 2.0));
    CHECK(d.mw_tilde == Approx(2.0));
    CHECK(lengths_and_scales(d).length == Approx(1.0));
  }
  SUBCASE("product is hbar") {
    PhysicalParams p{0.3, 1.7, 2.0, 5.0, -1.1, 0.4};
    const auto s = lengths_and_scales(derive(p));
    CHECK(s.length * s.momentum == Approx(0.3).epsilon(1e-14));
  }
  SUBCASE("critical symmetric") {
    try {
      lengths_and_scales(derive(PhysicalParams::natural_units(1.0, 4.0)));
      FAIL("expected CriticalRegime");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::CriticalRegime);
    }
  }
}

TEST_CASE("sign of B matters when theta != 0") {
  const auto up = derive(PhysicalParams::natural_units(1.0, 1.0));
  const auto down = derive(PhysicalParams::natural_units(-1.0, 1.0));
  CHECK(up.omega == down.omega);
  CHECK(up.omega_tilde != down.omega_tilde);
}

TEST_CASE("mu_L(theta) = mu_S(2 theta)") {
  for (double theta : {-3.0, -0.2, 0.0, 0.9, 5.5}) {
    const auto a = derive(PhysicalParams::natural_units(1.3, theta));
    const auto b = derive(PhysicalParams::natural_units(1.3, 2 * theta));
    CHECK(a.mu_L == Approx(b.mu_S).epsilon(1e-15));
  }
}

TEST_CASE("m~ w~ = m w/|mu_S|") {
  PhysicalParams p{1.0, 2.0, 1.0, 1.0, 3.0, 0.5};
  const auto d = derive(p);
  CHECK(d.m_tilde * d.omega_tilde == Approx(p.mass * d.omega / std::abs(d.mu_S)));
  CHECK(d.mw_tilde == Approx(d.m_tilde * d.omega_tilde));
}

TEST_CASE("lambda-cs units need theta > -2") {
  CHECK_THROWS_AS(PhysicalParams::lambda_cs_units(-2.0), Error);
  const auto d = derive(PhysicalParams::lambda_cs_units(1.0));
  CHECK(d.mw_tilde == Approx(2.0).epsilon(1e-14));
}

TEST_CASE("error kinds have names") {
  CHECK(to_string(ErrorKind::QuadratureNonConvergence) == "QuadratureNonConvergence");
  CHECK(to_string(ErrorKind::MissingInput) == "MissingInput");
}
