#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ncplane/fock.hpp"
#include "ncplane/params.hpp"
#include "ncplane/quadrature.hpp"

namespace ncplane::quantize {

using Complex = std::complex<double>;

// varpi_lambda(t) = (e^{-lambda/2}/sqrt(2 pi lambda)) int_0^inf du
//   exp(-e^{-lambda/2} t u) exp(-(ln u)^2/(2 lambda)).
// With u = e^v the integrand is exp(phi(v)), phi concave; it is summed by a
// trapezoid centred on the mode of phi with step min(sigma, 1)/4 and checked
// against the halved step. lambda = 0 is the e^{-t} branch.
class WeightFunction {
 public:
  explicit WeightFunction(double lambda);

  double lambda() const { return lambda_; }

  double value(double t) const;
  double log_value(double t) const;

  // n! e^{lambda n(n+1)/2}
  double analytic_moment(int n) const;
  double log_analytic_moment(int n) const;

  struct Moment {
    double value;
    double target;
    double rel_error;
  };

  // int_0^inf t^n varpi(t) dt over s = ln t: composite Gauss-Legendre with
  // panel widths 1 and 1/2, 10 nodes each.
  Moment moment(int n) const;

  // All moments 0..n_max sharing one set of weight evaluations.
  std::vector<Moment> moments(int n_max) const;

  static constexpr double kRefinementTol = 1e-8;

 private:
  double lambda_;
};

// Range [s_lo, s_hi] in s = ln t where (d+1) s + log varpi(e^s) is within
// `drop` of its maximum, for every d in [d_lo, d_hi].
std::pair<double, double> log_moment_range(const WeightFunction& w, double d_lo, double d_hi,
                                           double drop = 50.0);

// ---------------------------------------------------------------------------

struct Monomial {
  int a = 0;  // power of zeta
  int b = 0;  // power of conj(zeta)
  Complex coeff{1.0, 0.0};
};

// f(zeta, conj zeta) as a sum of monomials, or an opaque pointwise function.
class ClassicalObservable {
 public:
  static constexpr int kDefaultMaxDegree = 6;

  explicit ClassicalObservable(int max_degree = kDefaultMaxDegree) : max_degree_(max_degree) {}

  static ClassicalObservable monomial(int a, int b, Complex coeff = 1.0);
  static ClassicalObservable pointwise(std::function<Complex(Complex)> f,
                                       int max_degree = kDefaultMaxDegree);

  // Throws DomainError past the degree cap or for negative powers.
  ClassicalObservable& add(int a, int b, Complex coeff = 1.0);

  Complex operator()(Complex zeta) const;

  const std::vector<Monomial>& monomials() const { return terms_; }
  bool has_pointwise() const { return static_cast<bool>(pointwise_); }
  int max_degree() const { return max_degree_; }
  // Largest ladder displacement max(a, b) over the monomials; the degree cap
  // for a pointwise function.
  int ladder_order() const;

 private:
  std::vector<Monomial> terms_;
  std::function<Complex(Complex)> pointwise_;
  int max_degree_;
};

enum class QuantizationPath { Monomial, Pointwise };

struct QuantizedOperator {
  fock::Operator op;
  // Entries beyond the trust band exceed 1e-3 of the largest entry.
  bool truncation_warning = false;
  // Pointwise path only: per-entry size of the integrand, |f| in place of f.
  std::optional<Eigen::MatrixXd> envelope;
};

// f -> int (d^2 zeta/pi) varpi(|zeta|^2) E(|zeta|^2) f |zeta><zeta|.
// Monomial: <m|zeta^a conj(zeta)^b|n> = x_k!/sqrt(x_m! x_n!), k = a + m,
// nonzero only for m - n = b - a. Pointwise: polar quadrature.
QuantizedOperator quantize_lambda(const ClassicalObservable& f, double lambda, int N,
                                  QuantizationPath path = QuantizationPath::Monomial);

// Angular sample count for the pointwise path: exact for the Fourier modes
// reached by a degree-capped f on an N truncation.
int angular_samples(int N, int max_degree);

// ---------------------------------------------------------------------------
// Glauber states, measure e^{-|alpha|^2} d^2alpha/pi on each mode.

struct TwoModeMonomial {
  int a = 0, b = 0;  // alpha^a conj(alpha)^b
  int c = 0, d = 0;  // beta^c conj(beta)^d
  Complex coeff{1.0, 0.0};
};

struct TwoModeObservable {
  std::vector<TwoModeMonomial> terms;

  TwoModeObservable& add(int a, int b, int c, int d, Complex coeff = 1.0) {
    terms.push_back({a, b, c, d, coeff});
    return *this;
  }
};

// Single-mode anti-Wick matrix of alpha^a conj(alpha)^b: radial
// Gauss-Laguerre, exact angular selection.
fock::Operator quantize_standard_mode(int a, int b, int N, fock::Mode mode = fock::Mode::A);

// Two-mode operator, index n_A (N+1) + n_B.
fock::Operator quantize_standard(const TwoModeObservable& f, int N);

struct PhaseSpaceMap {
  fock::Operator x_1, x_2, p_1, p_2, q_1, q_2;
};

// x, p from the anti-Wick images of their coherent-state symbols, then
// q^k = x^k - (theta/2 hbar) eps^{kj} p_j. Throws CriticalRegime.
PhaseSpaceMap quantize_phase_space_map(const DerivedParams& d, int N);

// ---------------------------------------------------------------------------

struct VerificationRow {
  std::string identity;
  int N;
  double lambda;
  double max_abs_err;
  int trust_band;
};

// Every identity of the quantization map at (N, lambda). Rows named *_rel
// carry |A - B|/max(1, |B|, envelope) (pointwise quadrature) or a relative
// error (moments); the others are absolute.
std::vector<VerificationRow> verification_report(int N, double lambda, double theta = 1.0);

// max |A - B|/max(1, |B|) over the band 0..limit.
double max_mixed_deviation(const fock::Operator& op, const fock::Operator::Matrix& ref, int limit);

// max |A - B|/max(1, |B|, scale) over the band 0..limit.
double max_scaled_deviation(const fock::Operator& op, const fock::Operator::Matrix& ref,
                            const Eigen::MatrixXd& scale, int limit);

}  // namespace ncplane::quantize
