#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ncplane/quadrature.hpp"

using namespace ncplane::quadrature;
using doctest::Approx;

TEST_CASE("Gauss-Legendre integrates polynomials") {
  const auto r = gauss_legendre(10);
  CHECK(r.weights.sum() == Approx(2.0).epsilon(1e-15));
  for (int k = 0; k <= 19; ++k) {
    const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
    CHECK(r.apply([k](double x) { return std::pow(x, k); }) ==
          Approx(exact).epsilon(1e-14).scale(1.0));
  }
  CHECK((r.weights.array() > 0).all());
}

TEST_CASE("Gauss-Hermite moments") {
  const auto r = gauss_hermite(20);
  const double sp = std::sqrt(std::numbers::pi);
  CHECK(r.weights.sum() == Approx(sp).epsilon(1e-14));
  CHECK(r.apply([](double x) { return x * x; }) == Approx(sp / 2).epsilon(1e-14));
  CHECK(r.apply([](double x) { return std::pow(x, 8); }) == Approx(105 * sp / 16).epsilon(1e-13));
}

TEST_CASE("Gauss-Laguerre moments are factorials") {
  for (int n : {1, 5, 16, 40}) {
    const auto r = gauss_laguerre(n);
    for (int k = 0; k <= 2 * n - 1; k += 3) {
      CHECK(r.apply([k](double x) { return std::pow(x, k); }) ==
            Approx(std::tgamma(k + 1.0)).epsilon(1e-12));
    }
  }
}

TEST_CASE("uniform circle is exact on low Fourier modes") {
  const int M = 9;
  const auto r = uniform_circle(M);
  for (int k = -(M - 1); k <= M - 1; ++k) {
    const double re = r.apply([k](double p) { return std::cos(k * p); });
    CHECK(re == Approx(k == 0 ? 2 * std::numbers::pi : 0.0).scale(1.0).epsilon(1e-14));
  }
  // aliasing at k = M
  CHECK(r.apply([M](double p) { return std::cos(M * p); }) == Approx(2 * std::numbers::pi));
}

TEST_CASE("composite Legendre") {
  const auto r = composite_legendre(-3.0, 7.5, 1.0, 10);
  CHECK(r.size() == 11 * 10);
  CHECK(r.apply([](double x) { return std::exp(-x * x); }) ==
        Approx(std::sqrt(std::numbers::pi) / 2 * (std::erf(7.5) + std::erf(3.0))).epsilon(1e-14));
}
