#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <numbers>
#include <shared_mutex>
#include <span>
#include <vector>

#include "ncplane/classical.hpp"
#include "ncplane/fock.hpp"
#include "ncplane/params.hpp"

namespace ncplane::cstates {

using Complex = std::complex<double>;

// Series control shared by every lambda-CS sum.
inline constexpr double kSeriesRelTol = 1e-16;
inline constexpr int kSeriesMaxTerms = 10000;

// ---------------------------------------------------------------------------
// Generalised factorial and exponential: x_n = n e^{n lambda},
// x_n! = n! e^{lambda n (n+1)/2}, E_lambda(t) = sum t^n / x_n!.

double log_gen_factorial(int n, double lambda);
double gen_factorial(int n, double lambda);

struct SeriesValue {
  double value = 0.0;
  double log_value = 0.0;
  int terms = 0;
};

SeriesValue gen_exponential(double lambda, double t);

// E_lambda at fixed lambda with a memo of evaluated points. Safe to share
// between threads.
class GenExp {
 public:
  explicit GenExp(double lambda) : lambda_(lambda) {}

  double lambda() const { return lambda_; }
  double operator()(double t) const { return evaluate(t).value; }
  SeriesValue evaluate(double t) const;
  std::size_t cached() const;

 private:
  double lambda_;
  mutable std::shared_mutex mutex_;
  mutable std::map<double, SeriesValue> cache_;
};

// <J>_zeta in units hbar = m~w~/2 = 1.
double j_expectation(double abs_zeta, double lambda);
double j_expectation_abs2(double abs_zeta_sq, double lambda);

// Unique l >= 0 with (l/2) e^{lambda l/2} = |zeta|^2.
double classical_l_from_zeta(double abs_zeta, double lambda);

// e(lambda, l) = |<J> - l| / l at |zeta|^2 = (l/2) e^{lambda l/2}.
// Throws Error(DomainError) for l <= 0.
double error_function(double lambda, double l);

// Which x_n enters the lower-symbol evolution. GeneralizedFactorial uses
// x_n = n e^{n lambda}; ConstantGap uses x_n = n e^{lambda}, under which every
// term shares one frequency.
enum class GapConvention { GeneralizedFactorial, ConstantGap };

// zeta(t) = (zeta/E) sum_n |zeta|^{2n}/x_n! exp(-i (x_{n+2} - x_{n+1}) t).
// The weights and frequencies are built once; at() is cheap.
class LowerSymbolTrajectory {
 public:
  LowerSymbolTrajectory(Complex zeta, double lambda,
                        GapConvention convention = GapConvention::GeneralizedFactorial);

  Complex at(double t) const;
  int terms() const { return static_cast<int>(weights_.size()); }
  const Eigen::VectorXd& weights() const { return weights_; }
  const Eigen::VectorXd& frequencies() const { return frequencies_; }

 private:
  Complex zeta_;
  Eigen::VectorXd weights_;      // normalised to sum 1
  Eigen::VectorXd frequencies_;
};

Complex zeta_evolution(Complex zeta, double lambda, double t,
                       GapConvention convention = GapConvention::GeneralizedFactorial);

struct RadiusRange {
  double r_int = 0.0;
  double r_ext = 0.0;
};

// min / max of |zeta(t)| on a uniform grid of n_samples points over [0, t_max].
RadiusRange internal_radius(Complex zeta, double lambda,
                            double t_max = 8.0 * std::numbers::pi, int n_samples = 20000,
                            GapConvention convention = GapConvention::GeneralizedFactorial);

// ---------------------------------------------------------------------------
// Coherent-state vectors in the truncated Fock basis.

// Smallest N with sum_{n>N} |alpha|^{2n}/n! < tol.
int truncation_for_tail(double abs_alpha, double tol = 1e-12);

// e^{-|alpha|^2/2} sum alpha^n/sqrt(n!) |n>, n <= N.
fock::StateVector standard_cs(Complex alpha, int N);

// Malkin-Man'ko state |alpha> (x) |beta> on the two-mode basis (A = relative).
struct MMCoherentState {
  Complex alpha;
  Complex beta;
  int N;

  static MMCoherentState with_tail_bound(Complex alpha, Complex beta, double tol = 1e-12);

  fock::StateVector coefficients() const;

  // exp(-i H t/hbar)|alpha,beta>, H = hbar w~ (N_a + 1/2) (x) I, applied
  // coefficient by coefficient.
  fock::StateVector evolved(const DerivedParams& d, double t) const;
};

// Lambda coherent state |z0> (x) |zeta> in dimensionless labels.
struct LambdaCS {
  Complex zeta;
  Complex z0;
  double lambda;
  int N;

  // N such that the dropped zeta-series mass is below tol relative to E and
  // the z0 tail bound holds.
  static LambdaCS with_tail_bound(Complex zeta, Complex z0, double lambda,
                                  double tol = kSeriesRelTol);

  // c_n = zeta^n e^{-lambda n(n+1)/4} / sqrt(n! E_lambda(|zeta|^2)).
  fock::StateVector relative_coefficients() const;
  fock::StateVector coefficients() const;
};

// ---------------------------------------------------------------------------
// Malkin-Man'ko mean values and dispersions.

// alpha = R e^{-i phi}/sqrt(hbar):
// <x - x0>(t) = sqrt(2/m~w~) R (cos(w~t + phi), sin(w~t + phi)).
classical::Vec2 mm_mean_trajectory(const DerivedParams& d, double R, double phi, double t);

// The same expectation evaluated on the truncated two-mode Fock space, one
// value per time.
std::vector<classical::Vec2> mm_mean_trajectory_fock(const DerivedParams& d, double R, double phi,
                                                     Complex beta, std::span<const double> t);

// Landau-gauge semi-coherent state |alpha, k2>:
// <x^1>(t) = sqrt(2/(m w)) R cos(w t + phi) - mu_L k2/(m w).
double landau_mean_x1(const DerivedParams& d, double R, double phi, double k2, double t);
std::vector<double> landau_mean_x1_fock(const DerivedParams& d, double R, double phi, double k2,
                                        std::span<const double> t);

struct Dispersions {
  double dx = 0.0;
  double dp = 0.0;
  double product = 0.0;
};

// dx = sqrt(mu c hbar/(2 B|e|)), dp = sqrt(hbar B|e|/(2 c mu)), mu = mu_S.
// Throws CriticalRegime at mu_S = 0 and NegativeArgument when mu/B < 0.
Dispersions mm_dispersions(const DerivedParams& d);

// Variances of (x^i - x0^i) and P_i in |alpha, beta>, from Fock matrices.
struct FockDispersions {
  double dx_1 = 0.0, dx_2 = 0.0, dp_1 = 0.0, dp_2 = 0.0;
};

FockDispersions mm_dispersions_fock(const DerivedParams& d, Complex alpha, Complex beta);

}  // namespace ncplane::cstates
