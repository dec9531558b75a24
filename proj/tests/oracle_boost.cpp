// Independent checks against Boost.Math special functions and quadrature.
#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/lambert_w.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "ncplane/cstates.hpp"
#include "ncplane/quantize.hpp"

using namespace ncplane;

namespace {

// Raw u-integral of the weight, no change of variables.
double weight_raw(double lambda, double t) {
  const double k = std::exp(-0.5 * lambda);
  auto f = [&](double u) {
    if (!(u > 0.0 && u < std::numeric_limits<double>::infinity())) return 0.0;
    const double lu = std::log(u);
    return std::exp(-k * t * u - lu * lu / (2 * lambda));
  };
  boost::math::quadrature::exp_sinh<double> integrator;
  const double I = integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity());
  return k / std::sqrt(2 * std::numbers::pi * lambda) * I;
}

}  // namespace

TEST_CASE("l(zeta) against the Lambert W function") {
  for (double lambda : {0.25, 1.0, 2.0, 6.0}) {
    for (double z : {0.2, 1.0, 3.0}) {
      CAPTURE(lambda);
      CAPTURE(z);
      const double ref = 2.0 / lambda * boost::math::lambert_w0(lambda * z * z);
      CHECK(cstates::classical_l_from_zeta(z, lambda) == doctest::Approx(ref).epsilon(1e-13));
    }
  }
}

TEST_CASE("weight function against adaptive quadrature of the raw integral") {
  for (double lambda : {0.5, 2.0, 4.0}) {
    const quantize::WeightFunction w(lambda);
    for (double t : {0.01, 1.0, 10.0, 200.0}) {
      CAPTURE(lambda);
      CAPTURE(t);
      CHECK(w.value(t) == doctest::Approx(weight_raw(lambda, t)).epsilon(1e-10));
    }
  }
  CHECK(quantize::WeightFunction(2.0).value(1.0) == doctest::Approx(weight_raw(2.0, 1.0)).epsilon(1e-12));
}

TEST_CASE("moments against nested adaptive quadrature") {
  const double lambda = 1.0;
  const quantize::WeightFunction w(lambda);
  boost::math::quadrature::exp_sinh<double> outer;
  for (int n : {0, 2, 4}) {
    // the outer rule probes t at the extremes of double range
    auto g = [&](double t) {
      if (!(t > 1e-200 && t < 1e200)) return 0.0;
      const double w = weight_raw(lambda, t);
      return w == 0.0 ? 0.0 : std::pow(t, n) * w;
    };
    const double ref = outer.integrate(g, 0.0, std::numeric_limits<double>::infinity());
    CAPTURE(n);
    CHECK(w.moment(n).value == doctest::Approx(ref).epsilon(1e-8));
  }
}
