#include "ncplane/cstates.hpp"

#include <cmath>
#include <limits>
#include <mutex>
#include <vector>

#include "ncplane/error.hpp"

namespace ncplane::cstates {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_lambda(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorKind::DomainError, "lambda must be finite and >= 0");
  }
}

// log of the n-th step factor x_n under each convention.
double log_x(int n, double lambda, GapConvention conv) {
  return std::log(double(n)) + (conv == GapConvention::GeneralizedFactorial ? n * lambda : lambda);
}

// Terms s^n / x_n! held as logarithms, summed until the next term is below
// rel_tol of the running sum and the terms decrease.
struct LogSeries {
  std::vector<double> log_terms;
  double log_max = 0.0;
  double scaled_sum = 1.0;  // sum exp(log_term - log_max)

  double log_sum() const { return log_max + std::log(scaled_sum); }

  std::vector<double> normalised() const {
    std::vector<double> w(log_terms.size());
    const double ls = log_sum();
    for (std::size_t n = 0; n < w.size(); ++n) w[n] = std::exp(log_terms[n] - ls);
    return w;
  }
};

LogSeries log_series(double log_s, double lambda, GapConvention conv,
                     double rel_tol = kSeriesRelTol) {
  LogSeries out;
  out.log_terms.push_back(0.0);
  if (log_s == kNegInf) return out;
  const double log_tol = std::log(rel_tol);
  double prev = 0.0;
  for (int n = 1;; ++n) {
    if (n > kSeriesMaxTerms) {
      throw Error(ErrorKind::QuadratureNonConvergence,
                  "generalised exponential series did not converge");
    }
    const double lt = prev + log_s - log_x(n, lambda, conv);
    if (lt > out.log_max) {
      out.scaled_sum = out.scaled_sum * std::exp(out.log_max - lt) + 1.0;
      out.log_max = lt;
    } else {
      out.scaled_sum += std::exp(lt - out.log_max);
    }
    out.log_terms.push_back(lt);
    if (lt < prev && lt - out.log_sum() < log_tol) break;
    prev = lt;
  }
  return out;
}

double safe_log(double s) { return s > 0.0 ? std::log(s) : kNegInf; }

double j_from_log_s(double log_s, double lambda) {
  const auto w = log_series(log_s, lambda, GapConvention::GeneralizedFactorial).normalised();
  double j = 0.0;
  for (std::size_t n = 0; n < w.size(); ++n) j += w[n] * (2.0 * double(n) + 1.0);
  return j;
}

}  // namespace

double log_gen_factorial(int n, double lambda) {
  if (n < 0) throw Error(ErrorKind::DomainError, "factorial of a negative index");
  return std::lgamma(double(n) + 1.0) + 0.5 * lambda * double(n) * double(n + 1);
}

double gen_factorial(int n, double lambda) { return std::exp(log_gen_factorial(n, lambda)); }

SeriesValue gen_exponential(double lambda, double t) {
  require_lambda(lambda);
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw Error(ErrorKind::DomainError, "E_lambda needs a finite t >= 0");
  }
  const auto s = log_series(safe_log(t), lambda, GapConvention::GeneralizedFactorial);
  const double ls = s.log_sum();
  return {std::exp(ls), ls, static_cast<int>(s.log_terms.size())};
}

SeriesValue GenExp::evaluate(double t) const {
  {
    std::shared_lock lock(mutex_);
    if (auto it = cache_.find(t); it != cache_.end()) return it->second;
  }
  const SeriesValue v = gen_exponential(lambda_, t);
  std::unique_lock lock(mutex_);
  cache_.emplace(t, v);
  return v;
}

std::size_t GenExp::cached() const {
  std::shared_lock lock(mutex_);
  return cache_.size();
}

double j_expectation_abs2(double abs_zeta_sq, double lambda) {
  require_lambda(lambda);
  if (!(abs_zeta_sq >= 0.0)) throw Error(ErrorKind::DomainError, "|zeta|^2 must be >= 0");
  return j_from_log_s(safe_log(abs_zeta_sq), lambda);
}

double j_expectation(double abs_zeta, double lambda) {
  return j_expectation_abs2(abs_zeta * abs_zeta, lambda);
}

double classical_l_from_zeta(double abs_zeta, double lambda) {
  require_lambda(lambda);
  const double s = abs_zeta * abs_zeta;
  if (!(s >= 0.0) || !std::isfinite(s)) throw Error(ErrorKind::DomainError, "bad |zeta|");
  if (s == 0.0) return 0.0;
  if (lambda == 0.0) return 2.0 * s;

  // g(l) = log(l/2) + lambda l/2 - log s is increasing and concave: Newton
  // from the left converges monotonically, the bracket catches the rest.
  const double log_s = std::log(s);
  auto g = [&](double l) { return std::log(0.5 * l) + 0.5 * lambda * l - log_s; };
  double lo = 0.0, hi = 2.0 * s;
  double l = (2.0 / lambda) * std::log1p(lambda * s);
  for (int it = 0; it < 200; ++it) {
    const double gl = g(l);
    if (gl == 0.0) return l;
    (gl < 0.0 ? lo : hi) = l;
    double next = l - gl / (1.0 / l + 0.5 * lambda);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - l) <= 1e-15 * l) return next;
    l = next;
  }
  return l;
}

double error_function(double lambda, double l) {
  require_lambda(lambda);
  if (!(l > 0.0) || !std::isfinite(l)) {
    throw Error(ErrorKind::DomainError, "error function needs l > 0");
  }
  const double log_s = std::log(0.5 * l) + 0.5 * lambda * l;
  return std::abs(j_from_log_s(log_s, lambda) - l) / l;
}

LowerSymbolTrajectory::LowerSymbolTrajectory(Complex zeta, double lambda,
                                             GapConvention convention)
    : zeta_(zeta) {
  require_lambda(lambda);
  const auto w = log_series(safe_log(std::norm(zeta)), lambda, convention).normalised();
  const Eigen::Index n = static_cast<Eigen::Index>(w.size());
  weights_ = Eigen::Map<const Eigen::VectorXd>(w.data(), n);
  frequencies_.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    if (convention == GapConvention::ConstantGap) {
      frequencies_(k) = std::exp(lambda);
    } else {
      const double k1 = double(k + 1), k2 = double(k + 2);
      frequencies_(k) = k2 * std::exp(k2 * lambda) - k1 * std::exp(k1 * lambda);
    }
  }
}

Complex LowerSymbolTrajectory::at(double t) const {
  Complex acc{0.0, 0.0};
  double total = 0.0;
  for (Eigen::Index k = 0; k < weights_.size(); ++k) {
    const double ph = frequencies_(k) * t;
    acc += weights_(k) * Complex(std::cos(ph), -std::sin(ph));
    total += weights_(k);
  }
  // same summation order as acc, so t = 0 returns zeta exactly
  return zeta_ * (acc / total);
}

Complex zeta_evolution(Complex zeta, double lambda, double t, GapConvention convention) {
  return LowerSymbolTrajectory(zeta, lambda, convention).at(t);
}

RadiusRange internal_radius(Complex zeta, double lambda, double t_max, int n_samples,
                            GapConvention convention) {
  if (n_samples < 1000) throw Error(ErrorKind::DomainError, "need at least 1000 samples");
  if (!(t_max > 0.0)) throw Error(ErrorKind::DomainError, "t_max must be positive");
  const LowerSymbolTrajectory traj(zeta, lambda, convention);
  RadiusRange r{std::numeric_limits<double>::infinity(), 0.0};
  for (int k = 0; k < n_samples; ++k) {
    const double t = t_max * double(k) / double(n_samples - 1);
    const double a = std::abs(traj.at(t));
    r.r_int = std::min(r.r_int, a);
    r.r_ext = std::max(r.r_ext, a);
  }
  return r;
}

int truncation_for_tail(double abs_alpha, double tol) {
  if (!(abs_alpha >= 0.0) || !std::isfinite(abs_alpha)) {
    throw Error(ErrorKind::DomainError, "bad coherent-state amplitude");
  }
  if (abs_alpha == 0.0) return 0;
  // Tail sums from the top; the terms past the last one kept are below 1e-300
  // relative to tol and decreasing faster than geometrically.
  const double log_s = 2.0 * std::log(abs_alpha);
  std::vector<double> terms{1.0};
  double lt = 0.0;
  for (int n = 1; n <= kSeriesMaxTerms; ++n) {
    lt += log_s - std::log(double(n));
    terms.push_back(std::exp(lt));
    if (double(n) > 2.0 * abs_alpha * abs_alpha && terms.back() < 1e-30 * tol) break;
  }
  double tail = 0.0;
  for (int N = static_cast<int>(terms.size()) - 1; N >= 0; --N) {
    if (tail + terms[N] >= tol) return N;
    tail += terms[N];
  }
  return 0;
}

fock::StateVector standard_cs(Complex alpha, int N) {
  fock::StateVector v = fock::StateVector::Zero(N + 1);
  const double r = std::abs(alpha), arg = std::arg(alpha);
  if (r == 0.0) {
    v(0) = 1.0;
    return v;
  }
  for (int n = 0; n <= N; ++n) {
    const double lm = n * std::log(r) - 0.5 * std::lgamma(n + 1.0) - 0.5 * r * r;
    v(n) = std::polar(std::exp(lm), n * arg);
  }
  return v;
}

namespace {

fock::StateVector kron(const fock::StateVector& a, const fock::StateVector& b) {
  fock::StateVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

}  // namespace

MMCoherentState MMCoherentState::with_tail_bound(Complex alpha, Complex beta, double tol) {
  const int N = std::max({truncation_for_tail(std::abs(alpha), tol),
                          truncation_for_tail(std::abs(beta), tol), 1});
  return {alpha, beta, N};
}

fock::StateVector MMCoherentState::coefficients() const {
  return kron(standard_cs(alpha, N), standard_cs(beta, N));
}

fock::StateVector MMCoherentState::evolved(const DerivedParams& d, double t) const {
  require_regular_symmetric(d);
  fock::StateVector v = coefficients();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double n_a = double(i / (N + 1));
    v(i) *= std::polar(1.0, -d.omega_tilde * (n_a + 0.5) * t);
  }
  return v;
}

LambdaCS LambdaCS::with_tail_bound(Complex zeta, Complex z0, double lambda, double tol) {
  require_lambda(lambda);
  const auto s = log_series(safe_log(std::norm(zeta)), lambda,
                            GapConvention::GeneralizedFactorial, tol);
  const int n_zeta = static_cast<int>(s.log_terms.size()) - 1;
  const int N = std::max({n_zeta, truncation_for_tail(std::abs(z0)), 1});
  return {zeta, z0, lambda, N};
}

fock::StateVector LambdaCS::relative_coefficients() const {
  require_lambda(lambda);
  fock::StateVector v = fock::StateVector::Zero(N + 1);
  const double r = std::abs(zeta), arg = std::arg(zeta);
  if (r == 0.0) {
    v(0) = 1.0;
    return v;
  }
  const double log_e = gen_exponential(lambda, r * r).log_value;
  for (int n = 0; n <= N; ++n) {
    const double lm = n * std::log(r) - 0.5 * log_gen_factorial(n, lambda) - 0.5 * log_e;
    v(n) = std::polar(std::exp(lm), n * arg);
  }
  return v;
}

fock::StateVector LambdaCS::coefficients() const {
  return kron(relative_coefficients(), standard_cs(z0, N));
}

classical::Vec2 mm_mean_trajectory(const DerivedParams& d, double R, double phi, double t) {
  require_regular_symmetric(d);
  const double amp = std::sqrt(2.0 / d.mw_tilde) * R;
  const double ph = d.omega_tilde * t + phi;
  return {amp * std::cos(ph), amp * std::sin(ph)};
}

namespace {

double expect(const fock::StateVector& v, const fock::Operator& op) {
  return (v.adjoint() * op.matrix() * v)(0, 0).real();
}

double variance(const fock::StateVector& v, const fock::Operator& op) {
  const double m = expect(v, op);
  return expect(v, op * op) - m * m;
}

}  // namespace

std::vector<classical::Vec2> mm_mean_trajectory_fock(const DerivedParams& d, double R, double phi,
                                                     Complex beta, std::span<const double> t) {
  const Complex alpha = std::polar(R / std::sqrt(d.phys.hbar), -phi);
  auto st = MMCoherentState::with_tail_bound(alpha, beta);
  st.N += 2;
  const auto cr = fock::center_and_relative(d, st.N);
  std::vector<classical::Vec2> out;
  out.reserve(t.size());
  for (double ti : t) {
    const auto v = st.evolved(d, ti);
    out.emplace_back(expect(v, cr.r_1), expect(v, cr.r_2));
  }
  return out;
}

double landau_mean_x1(const DerivedParams& d, double R, double phi, double k2, double t) {
  const double m = d.phys.mass, w = d.omega;
  if (!(w > 0.0)) throw Error(ErrorKind::DomainError, "Landau states need B != 0");
  return std::sqrt(2.0 / (m * w)) * R * std::cos(w * t + phi) - d.mu_L * k2 / (m * w);
}

std::vector<double> landau_mean_x1_fock(const DerivedParams& d, double R, double phi, double k2,
                                        std::span<const double> t) {
  if (!(d.omega > 0.0)) throw Error(ErrorKind::DomainError, "Landau states need B != 0");
  const Complex alpha = std::polar(R / std::sqrt(d.phys.hbar), -phi);
  const int N = std::max(truncation_for_tail(std::abs(alpha)), 1) + 2;
  const fock::StateVector v0 = standard_cs(alpha, N);
  const auto x1 = fock::landau_position_x1(d, N, k2);
  std::vector<double> out;
  out.reserve(t.size());
  for (double ti : t) {
    fock::StateVector v = v0;
    for (int n = 0; n <= N; ++n) v(n) *= std::polar(1.0, -d.omega * (n + 0.5) * ti);
    out.push_back(expect(v, x1));
  }
  return out;
}

Dispersions mm_dispersions(const DerivedParams& d) {
  require_regular_symmetric(d);
  const double mu = d.mu_S, B = d.phys.B;
  if (mu / B < 0.0) {
    throw Error(ErrorKind::NegativeArgument, "mu/B < 0: dispersion under a negative root");
  }
  const double hbar = d.phys.hbar, c = d.phys.c, e = d.phys.charge;
  Dispersions out;
  out.dx = std::sqrt(mu * c * hbar / (2.0 * B * e));
  out.dp = std::sqrt(hbar * B * e / (2.0 * c * mu));
  out.product = out.dx * out.dp;
  return out;
}

FockDispersions mm_dispersions_fock(const DerivedParams& d, Complex alpha, Complex beta) {
  auto st = MMCoherentState::with_tail_bound(alpha, beta);
  st.N += 2;
  const auto v = st.coefficients();
  const auto cr = fock::center_and_relative(d, st.N);
  return {std::sqrt(variance(v, cr.r_1)), std::sqrt(variance(v, cr.r_2)),
          std::sqrt(variance(v, cr.P_1)), std::sqrt(variance(v, cr.P_2))};
}

}  // namespace ncplane::cstates
